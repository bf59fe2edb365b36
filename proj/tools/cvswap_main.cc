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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvswap/experiments.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoCoincidences = 2;
constexpr int kExitSelfTest = 3;

// Raw flag values; unset flags leave the config file (or defaults) alone.
struct Flags {
    std::optional<std::string> config_path;
    std::optional<double> chi1;
    std::vector<double> squeezing;
    std::optional<double> eta;
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    std::optional<size_t> lambda_steps;
    std::optional<size_t> angles_steps;
    std::optional<std::string> out;
    bool svg = false;
    bool corrupt_gain_phase = false;
};

cvswap::ExperimentConfig resolve_config(const Flags &flags) {
    cvswap::ExperimentConfig config;
    if (flags.config_path) {
        config = cvswap::load_config_file(*flags.config_path);
    }
    if (flags.chi1) {
        config.chi1 = *flags.chi1;
    }
    if (!flags.squeezing.empty()) {
        config.squeezing_levels = flags.squeezing;
    }
    if (flags.eta) {
        config.eta = *flags.eta;
    }
    if (flags.lambda_min) {
        config.lambda_grid.min = *flags.lambda_min;
    }
    if (flags.lambda_max) {
        config.lambda_grid.max = *flags.lambda_max;
    }
    if (flags.lambda_steps) {
        config.lambda_grid.steps = *flags.lambda_steps;
    }
    if (flags.angles_steps) {
        config.angle_grid_steps = *flags.angles_steps;
    }
    if (flags.out) {
        config.output_dir = *flags.out;
    }
    if (flags.svg) {
        config.emit_svg = true;
    }
    config.validate();
    return config;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw cvswap::ConfigError("cannot write " + path.string());
    }
    out << text;
}

// CSV goes to <out>/<name>.csv, or stdout when no directory is configured.
void emit(const cvswap::ExperimentConfig &config, const std::string &name, const cvswap::Table &table, const std::string &title) {
    std::string csv = cvswap::to_csv(table);
    if (config.output_dir.empty()) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
        if (config.emit_svg) {
            write_file(name + ".svg", cvswap::to_svg(table, title));
        }
        return;
    }
    std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / (name + ".csv"), csv);
    if (config.emit_svg) {
        write_file(dir / (name + ".svg"), cvswap::to_svg(table, title));
    }
}

void add_common_flags(CLI::App &app, Flags &flags) {
    app.add_option("--config", flags.config_path, "Config file of 'key = value' lines; flags override it");
    app.add_option("--chi1", flags.chi1, "Source conversion efficiency chi1 (default 0.1)");
    app.add_option("--squeezing", flags.squeezing,
                   "Resource squeezing level in [0,1), repeatable (defaults: fig3 0.99,0.8; fig4 0.1,0.5,0.8,0.99; "
                   "operating-point 0.5; threshold-scan 0.3,0.5,0.9)");
    app.add_option("--eta", flags.eta, "Homodyne efficiency (default 1.0; operating-point 0.9)");
    app.add_option("--lambda-min", flags.lambda_min, "Gain sweep start (default 0.01)");
    app.add_option("--lambda-max", flags.lambda_max, "Gain sweep end (default 2.0)");
    app.add_option("--lambda-steps", flags.lambda_steps, "Gain sweep points (default 400)");
    app.add_option("--angles-steps", flags.angles_steps, "Angle scan points over [0, pi/2] (default 721)");
    app.add_option("--out", flags.out, "Output directory; CSV goes to stdout when omitted");
    app.add_flag("--svg", flags.svg, "Also write an SVG line plot");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Continuous-variable entanglement swapping: CH violation of teleported photon pairs"};
    app.require_subcommand(1);
    Flags flags;

    auto *fig3 = app.add_subcommand("fig3", "S versus analyzer angle at unity gain");
    auto *fig4 = app.add_subcommand("fig4", "S versus feedforward gain at the maximizing angles");
    auto *op = app.add_subcommand("operating-point", "S and coincidence ratio at the optimal gain");
    auto *threshold = app.add_subcommand("threshold-scan", "S at optimal gain versus homodyne efficiency");
    auto *selftest = app.add_subcommand("selftest", "Run invariant and oracle-equivalence checks");
    for (auto *sub : {fig3, fig4, op, threshold}) {
        add_common_flags(*sub, flags);
    }
    selftest->add_flag("--corrupt-gain-phase", flags.corrupt_gain_phase, "Flip the feedforward gain phase (mutation check)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (selftest->parsed()) {
            cvswap::SelfTestOptions options;
            if (flags.corrupt_gain_phase) {
                options.gain_phase_sign = -cvswap::kGainPhaseSign;
            }
            auto report = cvswap::run_selftest(options);
            std::cout << report.text;
            return report.passed ? kExitOk : kExitSelfTest;
        }

        auto config = resolve_config(flags);
        if (fig3->parsed()) {
            emit(config, "fig3", cvswap::run_fig3(config), "S_AD' vs theta_a, unity gain");
        } else if (fig4->parsed()) {
            emit(config, "fig4", cvswap::run_fig4(config), "S_AD' vs feedforward gain");
        } else if (op->parsed()) {
            emit(config, "operating_point", cvswap::run_operating_point(config), "operating point");
        } else if (threshold->parsed()) {
            auto scan = cvswap::run_threshold_scan(config);
            emit(config, "threshold_scan", scan.table, "S_AD' at optimal gain vs eta");
            auto &log = config.output_dir.empty() ? std::cerr : std::cout;
            for (size_t k = 0; k < scan.crossings.size(); k++) {
                log << "# crossing " << scan.table.header[k + 1] << " eta="
                    << (scan.crossings[k] ? cvswap::format_number(*scan.crossings[k]) : std::string("none")) << "\n";
            }
        }
    } catch (const cvswap::NoCoincidencesError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoCoincidences;
    } catch (const cvswap::ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
