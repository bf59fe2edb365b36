// Copyright 2026 The cvswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvswap/experiments.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "cvswap/fock_oracle.h"

namespace cvswap {

double GridSpec::at(size_t k) const {
    if (k + 1 == steps) {
        return max;
    }
    return min + (max - min) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

namespace {

void check_grid(const GridSpec &grid, const char *name) {
    if (!std::isfinite(grid.min) || !std::isfinite(grid.max) || !(grid.max > grid.min) || grid.steps < 2) {
        throw ConfigError(std::string(name) + " grid needs finite min < max and at least 2 steps");
    }
}

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        b++;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        e--;
    }
    return std::string(s.substr(b, e - b));
}

double parse_double(const std::string &key, const std::string &text) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("bad number for '" + key + "': " + text);
    }
    return value;
}

size_t parse_size(const std::string &key, const std::string &text) {
    size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("bad integer for '" + key + "': " + text);
    }
    return value;
}

bool parse_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError("bad boolean for '" + key + "': " + text);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!std::isfinite(chi1) || chi1 < 0) {
        throw ConfigError("chi1 must be finite and >= 0");
    }
    for (double s : squeezing_levels) {
        if (!(s >= 0 && s < 1)) {
            throw ConfigError("squeezing levels must lie in [0, 1)");
        }
    }
    if (eta.has_value() && !(*eta >= 0 && *eta <= 1)) {
        throw ConfigError("eta must lie in [0, 1]");
    }
    check_grid(lambda_grid, "lambda");
    if (lambda_grid.min < 0) {
        throw ConfigError("lambda grid must be nonnegative");
    }
    check_grid(eta_grid, "eta");
    if (!(eta_grid.min > 0) || eta_grid.max > 1) {
        throw ConfigError("eta grid must lie in (0, 1]");
    }
    if (angle_grid_steps < 2) {
        throw ConfigError("angle grid needs at least 2 steps");
    }
}

void apply_config_text(ExperimentConfig &config, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    bool squeezing_seen = false;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key == "chi1") {
            config.chi1 = parse_double(key, value);
        } else if (key == "squeezing") {
            if (!squeezing_seen) {
                config.squeezing_levels.clear();
                squeezing_seen = true;
            }
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                config.squeezing_levels.push_back(parse_double(key, trim(item)));
            }
        } else if (key == "eta") {
            config.eta = parse_double(key, value);
        } else if (key == "lambda_min") {
            config.lambda_grid.min = parse_double(key, value);
        } else if (key == "lambda_max") {
            config.lambda_grid.max = parse_double(key, value);
        } else if (key == "lambda_steps") {
            config.lambda_grid.steps = parse_size(key, value);
        } else if (key == "eta_min") {
            config.eta_grid.min = parse_double(key, value);
        } else if (key == "eta_max") {
            config.eta_grid.max = parse_double(key, value);
        } else if (key == "eta_steps") {
            config.eta_grid.steps = parse_size(key, value);
        } else if (key == "angles_steps") {
            config.angle_grid_steps = parse_size(key, value);
        } else if (key == "out") {
            config.output_dir = value;
        } else if (key == "svg") {
            config.emit_svg = parse_bool(key, value);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
}

ExperimentConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    ExperimentConfig config;
    apply_config_text(config, buf.str());
    return config;
}

std::vector<double> Table::column(size_t k) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &row : rows) {
        out.push_back(row.at(k));
    }
    return out;
}

size_t Table::column_index(const std::string &name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw std::out_of_range("no column named " + name);
    }
    return static_cast<size_t>(it - header.begin());
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%#.9g", x);
    return buf;
}

std::string to_csv(const Table &table) {
    std::string out;
    for (size_t k = 0; k < table.header.size(); k++) {
        if (k) {
            out += ',';
        }
        out += table.header[k];
    }
    out += '\n';
    for (const auto &row : table.rows) {
        for (size_t k = 0; k < row.size(); k++) {
            if (k) {
                out += ',';
            }
            out += format_number(row[k]);
        }
        out += '\n';
    }
    return out;
}

std::string to_svg(const Table &table, const std::string &title) {
    const double width = 640;
    const double height = 420;
    const double left = 70;
    const double right = 150;
    const double top = 40;
    const double bottom = 50;
    const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto &row : table.rows) {
        x_lo = std::min(x_lo, row[0]);
        x_hi = std::max(x_hi, row[0]);
        for (size_t k = 1; k < row.size(); k++) {
            if (std::isfinite(row[k])) {
                y_lo = std::min(y_lo, row[k]);
                y_hi = std::max(y_hi, row[k]);
            }
        }
    }
    if (!(x_hi > x_lo)) {
        x_hi = x_lo + 1;
    }
    if (!(y_hi > y_lo)) {
        y_hi = y_lo + 1;
    }
    double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
    auto px = [&](double x) {
        return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right);
    };
    auto py = [&](double y) {
        return top + (y_hi - y) / (y_hi - y_lo) * (height - top - bottom);
    };

    std::ostringstream out;
    char buf[160];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
    std::snprintf(buf, sizeof(buf), "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                  left, top, width - left - right, height - top - bottom);
    out << buf;
    if (y_lo < 1 && y_hi > 1) {
        std::snprintf(buf, sizeof(buf), "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
                      px(x_lo), py(1), px(x_hi), py(1));
        out << buf;
    }
    const std::pair<double, const char *> ticks[] = {{x_lo, "start"}, {x_hi, "end"}};
    for (const auto &[x, anchor] : ticks) {
        std::snprintf(buf, sizeof(buf), "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"%s\">%.4g</text>\n",
                      px(x), height - bottom + 16, anchor, x);
        out << buf;
    }
    for (double y : {y_lo + pad, y_hi - pad}) {
        std::snprintf(buf, sizeof(buf), "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">%.4g</text>\n",
                      left - 6, py(y) + 4, y);
        out << buf;
    }
    out << "<text x=\"" << px((x_lo + x_hi) / 2) << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << table.header[0] << "</text>\n";

    for (size_t k = 1; k < table.header.size(); k++) {
        const char *color = colors[(k - 1) % std::size(colors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto &row : table.rows) {
            if (std::isfinite(row[k])) {
                std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(row[0]), py(row[k]));
                out << buf;
            }
        }
        out << "\"/>\n";
        std::snprintf(buf, sizeof(buf), "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                      width - right + 10, top + 18.0 * static_cast<double>(k), color, table.header[k].c_str());
        out << buf;
    }
    out << "</svg>\n";
    return out.str();
}

std::string squeezing_column_name(double squeezing) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", squeezing * 100);
    return std::string("s_") + buf;
}

namespace {

std::vector<double> levels_or(const ExperimentConfig &config, std::vector<double> fallback) {
    return config.squeezing_levels.empty() ? fallback : config.squeezing_levels;
}

std::vector<std::string> header_with_levels(const std::string &first, const std::vector<double> &levels) {
    std::vector<std::string> header{first};
    for (double s : levels) {
        header.push_back(squeezing_column_name(s));
    }
    return header;
}

SwapCircuitOutput circuit_at(const ExperimentConfig &config, double squeezing, double lambda, double eta) {
    return build_swap_circuit(SwapParams{config.chi1, squeezing_to_chi(squeezing), lambda, eta});
}

}  // namespace

Table run_fig3(const ExperimentConfig &config) {
    config.validate();
    auto levels = levels_or(config, {0.99, 0.80});
    double eta = config.eta.value_or(1.0);
    std::vector<SwapCircuitOutput> circuits;
    for (double s : levels) {
        circuits.push_back(circuit_at(config, s, 1.0, eta));
    }
    Table table{header_with_levels("theta_a_rad", levels), {}};
    for (size_t k = 0; k < config.angle_grid_steps; k++) {
        double theta = (std::numbers::pi / 2) * static_cast<double>(k) / static_cast<double>(config.angle_grid_steps - 1);
        std::vector<double> row{theta};
        for (const auto &circuit : circuits) {
            row.push_back(ch_s(circuit, AnalyzerAngles::family(theta)).s);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table run_fig4(const ExperimentConfig &config) {
    config.validate();
    auto levels = levels_or(config, {0.10, 0.50, 0.80, 0.99});
    double eta = config.eta.value_or(1.0);
    auto angles = AnalyzerAngles::maximizing_set();
    Table table{header_with_levels("lambda", levels), {}};
    for (size_t k = 0; k < config.lambda_grid.steps; k++) {
        double lambda = config.lambda_grid.at(k);
        std::vector<double> row{lambda};
        for (double s : levels) {
            row.push_back(ch_s(circuit_at(config, s, lambda, eta), angles).s);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table run_operating_point(const ExperimentConfig &config) {
    config.validate();
    auto levels = levels_or(config, {0.50});
    double eta = config.eta.value_or(0.9);
    if (!(eta > 0)) {
        throw ConfigError("operating-point needs eta > 0");
    }
    auto angles = AnalyzerAngles::maximizing_set();
    Table table{{"squeezing", "chi2", "eta", "lambda_op", "s_ab", "s_ad", "s_ad_analytic", "coincidence_ratio",
                 "raw_coincidence_ratio"},
                {}};
    for (double s : levels) {
        double chi2 = squeezing_to_chi(s);
        double lambda_op = optimal_gain(chi2, eta);
        auto circuit = circuit_at(config, s, lambda_op, eta);
        auto baseline = ch_s(circuit.beam_a, circuit.beam_b, angles);
        auto teleported = ch_s(circuit, angles);

        auto ea = analyzer(circuit.beam_a, angles.theta_a, ArmSide::kSource);
        auto eb = analyzer(circuit.beam_b, angles.theta_b, ArmSide::kRelay);
        auto ed = analyzer(circuit.beam_d_prime, angles.theta_b, ArmSide::kRelay);
        // Coincidences in excess of the accidental background.
        double correlated_b = coincidence_rate(ea, eb) - accidental_rate(ea, eb);
        double correlated_d = coincidence_rate(ea, ed) - accidental_rate(ea, ed);

        double analytic = lambda_op > 0 ? analytic_s_ad(AnalyticInputs{baseline.s, chi2, lambda_op, eta}) : NAN;
        table.rows.push_back({s, chi2, eta, lambda_op, baseline.s, teleported.s, analytic, correlated_d / correlated_b,
                              teleported.r_ab / baseline.r_ab});
    }
    return table;
}

std::optional<double> interpolate_crossing(const std::vector<double> &xs, const std::vector<double> &ys, double level) {
    for (size_t k = 0; k + 1 < xs.size() && k + 1 < ys.size(); k++) {
        double a = ys[k] - level;
        double b = ys[k + 1] - level;
        if (a == 0) {
            return xs[k];
        }
        if ((a < 0) != (b < 0) || b == 0) {
            return xs[k] + (xs[k + 1] - xs[k]) * a / (a - b);
        }
    }
    return std::nullopt;
}

ThresholdScan run_threshold_scan(const ExperimentConfig &config) {
    config.validate();
    auto levels = levels_or(config, {0.30, 0.50, 0.90});
    auto angles = AnalyzerAngles::maximizing_set();
    ThresholdScan scan;
    scan.table.header = header_with_levels("eta", levels);
    for (size_t k = 0; k < config.eta_grid.steps; k++) {
        double eta = config.eta_grid.at(k);
        std::vector<double> row{eta};
        for (double s : levels) {
            double chi2 = squeezing_to_chi(s);
            row.push_back(ch_s(circuit_at(config, s, optimal_gain(chi2, eta), eta), angles).s);
        }
        scan.table.rows.push_back(std::move(row));
    }
    auto etas = scan.table.column(0);
    for (size_t c = 1; c < scan.table.header.size(); c++) {
        scan.crossings.push_back(interpolate_crossing(etas, scan.table.column(c), 1.0));
    }
    return scan;
}

std::vector<LinearField> random_field_product(std::mt19937_64 &rng, size_t length, size_t modes, double max_coeff) {
    std::uniform_real_distribution<double> radius(0.0, max_coeff);
    std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
    std::uniform_int_distribution<int> coin(0, 2);
    std::vector<LinearField> out;
    for (size_t k = 0; k < length; k++) {
        LinearField::CoeffMap ann;
        LinearField::CoeffMap cre;
        for (uint32_t m = 0; m < modes; m++) {
            // Leave some slots empty so sparse fields are exercised too.
            if (coin(rng) != 0) {
                ann[ModeId{m}] = std::polar(radius(rng), phase(rng));
            }
            if (coin(rng) != 0) {
                cre[ModeId{m}] = std::polar(radius(rng), phase(rng));
            }
        }
        out.emplace_back(std::move(ann), std::move(cre));
    }
    return out;
}

namespace {

struct Check {
    std::string name;
    std::function<std::optional<std::string>()> run;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

}  // namespace

SelfTestReport run_selftest(const SelfTestOptions &options) {
    const std::vector<double> chis{0.0, 0.1, 0.34, 0.8, 2.3};
    const std::vector<double> etas{0.5, 0.83, 0.9, 1.0};
    CircuitOptions circuit_options;
    circuit_options.gain_phase_sign = options.gain_phase_sign;

    std::vector<Check> checks;
    checks.push_back({"commutator [F, F^dag] = 1 on every circuit output", [&]() -> std::optional<std::string> {
                          for (double chi2 : chis) {
                              for (double lambda : {0.0, 0.3, std::tanh(chi2), 1.0, 2.0}) {
                                  for (double eta : etas) {
                                      auto c = build_swap_circuit(SwapParams{0.1, chi2, lambda, eta}, circuit_options);
                                      for (const auto *f : {&c.beam_a.h, &c.beam_a.v, &c.beam_d_prime.h, &c.beam_d_prime.v}) {
                                          double err = std::abs(commutator(*f, f->adjoint()) - Complex{1, 0});
                                          if (err > 1e-12) {
                                              return "commutator violation " + sci(err) + " at chi2=" + format_number(chi2) +
                                                     " lambda=" + format_number(lambda) + " eta=" + format_number(eta);
                                          }
                                      }
                                      if (std::abs(commutator(c.beam_d_prime.h, c.beam_d_prime.v.adjoint())) > 1e-12) {
                                          return "D' polarizations are not independent at chi2=" + format_number(chi2);
                                      }
                                  }
                              }
                          }
                          return std::nullopt;
                      }});
    // A flipped gain phase keeps [F, F^dag] = 1 (B^dag replaces B), so the
    // relay field must be checked against B directly.
    checks.push_back({"relay commutator [D', B^dag] = -lambda sqrt(eta)", [&]() -> std::optional<std::string> {
                          for (double chi2 : chis) {
                              for (double lambda : {0.3, 1.0, 2.0}) {
                                  for (double eta : etas) {
                                      auto c = build_swap_circuit(SwapParams{0.1, chi2, lambda, eta}, circuit_options);
                                      Complex want{-lambda * std::sqrt(eta), 0};
                                      // D'_h carries B_h, D'_v carries B_v.
                                      const std::pair<const LinearField *, const LinearField *> pairs[] = {
                                          {&c.beam_d_prime.h, &c.beam_b.h},
                                          {&c.beam_d_prime.v, &c.beam_b.v},
                                      };
                                      for (const auto &[d, b] : pairs) {
                                          double err = std::abs(commutator(*d, b->adjoint()) - want);
                                          if (err > 1e-12) {
                                              return "commutator violation: [D', B^dag] off by " + sci(err) +
                                                     " at chi2=" + format_number(chi2) + " lambda=" + format_number(lambda) +
                                                     " eta=" + format_number(eta);
                                          }
                                      }
                                  }
                              }
                          }
                          return std::nullopt;
                      }});
    checks.push_back({"homodyne currents commute",[&]() -> std::optional<std::string> {
                          for (double eta : etas) {
                              ModeRegistry reg;
                              auto [a, b] = opo_type2(reg, 0.2);
                              auto [c, d] = opo_type2(reg, 0.7, "C", "D");
                              auto x = homodyne_currents(b.h, c.h, eta, reg, "h");
                              double err = std::abs(commutator(x.x_plus, x.x_minus));
                              if (err > 1e-12) {
                                  return "[x+, x-] = " + sci(err) + " at eta=" + format_number(eta);
                              }
                          }
                          return std::nullopt;
                      }});
    checks.push_back({"Wick pairing matches normal ordering", [&]() -> std::optional<std::string> {
                          std::mt19937_64 rng(20261015);
                          std::uniform_int_distribution<size_t> len(0, 8);
                          std::uniform_int_distribution<size_t> nmodes(1, 6);
                          for (int trial = 0; trial < 60; trial++) {
                              auto product = random_field_product(rng, len(rng), nmodes(rng), 2.0);
                              double err = std::abs(vacuum_expectation(product) - normal_order_expectation(product));
                              if (err > 1e-12) {
                                  return "deviation " + sci(err) + " on trial " + std::to_string(trial);
                              }
                          }
                          return std::nullopt;
                      }});
    checks.push_back({"Wick rates match the Fock simulator", [&]() -> std::optional<std::string> {
                          for (double chi1 : {0.05, 0.2}) {
                              auto state = build_source_state(chi1, kDefaultCutoff, SourceForm::kExactProduct);
                              ModeRegistry reg;
                              auto [a, b] = opo_type2(reg, chi1);
                              for (double ta : {0.0, 0.3, 1.1}) {
                                  for (double tb : {-0.7, 0.2, 0.9}) {
                                      double wick = coincidence_rate(analyzer(a, ta, ArmSide::kSource), analyzer(b, tb, ArmSide::kRelay));
                                      double fock = fock_coincidence_rate(state, ta, tb);
                                      double rel = std::abs(wick - fock) / std::max(std::abs(fock), 1e-300);
                                      if (rel > 1e-6) {
                                          return "relative deviation " + sci(rel) + " at chi1=" + format_number(chi1);
                                      }
                                  }
                              }
                          }
                          return std::nullopt;
                      }});
    checks.push_back({"S preserved at lambda = tanh(chi2)", [&]() -> std::optional<std::string> {
                          auto angles = AnalyzerAngles::maximizing_set();
                          for (double chi2 : {0.05, 0.34, 0.8}) {
                              auto c = build_swap_circuit(SwapParams{0.1, chi2, std::tanh(chi2), 1.0}, circuit_options);
                              double err = std::abs(ch_s(c, angles).s - ch_s(c.beam_a, c.beam_b, angles).s);
                              if (err > 1e-9) {
                                  return "S_AD' - S_AB = " + sci(err) + " at chi2=" + format_number(chi2);
                              }
                          }
                          return std::nullopt;
                      }});

    SelfTestReport report;
    for (const auto &check : checks) {
        std::optional<std::string> failure;
        try {
            failure = check.run();
        } catch (const std::exception &e) {
            failure = std::string("exception: ") + e.what();
        }
        if (failure.has_value()) {
            report.passed = false;
            report.text += "FAIL " + check.name + ": " + *failure + "\n";
            return report;
        }
        report.text += "ok   " + check.name + "\n";
    }
    return report;
}

}  // namespace cvswap
