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
#include <cmath>
#include <numbers>

#include "doctest.h"

using namespace cvswap;

namespace {

size_t argmax(const std::vector<double> &v) {
    return static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("experiments.config_parsing") {
    ExperimentConfig config;
    apply_config_text(config,
                      "# comment line\n"
                      "chi1 = 0.05\n"
                      "squeezing = 0.5, 0.8   # trailing comment\n"
                      "squeezing = 0.9\n"
                      "eta=0.95\n"
                      "lambda_min = 0.1\nlambda_max = 1.5\nlambda_steps = 15\n"
                      "eta_min = 0.6\neta_steps = 5\n"
                      "angles_steps = 9\nout = results\nsvg = true\n");
    CHECK(config.chi1 == 0.05);
    CHECK(config.squeezing_levels == std::vector<double>{0.5, 0.8, 0.9});
    CHECK(config.eta == 0.95);
    CHECK(config.lambda_grid.min == 0.1);
    CHECK(config.lambda_grid.max == 1.5);
    CHECK(config.lambda_grid.steps == 15);
    CHECK(config.eta_grid.min == 0.6);
    CHECK(config.eta_grid.steps == 5);
    CHECK(config.angle_grid_steps == 9);
    CHECK(config.output_dir == "results");
    CHECK(config.emit_svg);
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("experiments.config_errors") {
    ExperimentConfig config;
    CHECK_THROWS_AS(apply_config_text(config, "bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(config, "chi1 0.1\n"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(config, "chi1 = abc\n"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(config, "svg = maybe\n"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/cvswap.cfg"), ConfigError);

    ExperimentConfig bad;
    bad.eta = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.squeezing_levels = {1.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.chi1 = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.lambda_grid = {1.0, 0.5, 10};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.angle_grid_steps = 1;
    CHECK_THROWS_AS(run_fig3(bad), ConfigError);
}

TEST_CASE("experiments.grid_and_formatting") {
    GridSpec grid{0.0, 1.0, 5};
    CHECK(grid.at(0) == 0.0);
    CHECK(grid.at(2) == 0.5);
    CHECK(grid.at(4) == 1.0);
    CHECK(format_number(1.0) == "1.00000000");
    CHECK(format_number(0.1234567891234) == "0.123456789");
    CHECK(squeezing_column_name(0.99) == "s_99");
    CHECK(squeezing_column_name(0.125) == "s_12.5");

    Table t{{"x", "y"}, {{0.0, 1.0}, {0.5, 2.0}}};
    CHECK(to_csv(t) == "x,y\n0.00000000,1.00000000\n0.500000000,2.00000000\n");
    CHECK(t.column_index("y") == 1);
    CHECK_THROWS_AS(t.column_index("z"), std::out_of_range);
    auto svg = to_svg(t, "title");
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    Table above{{"x", "y"}, {{0.0, 2.0}, {1.0, 3.0}}};
    CHECK(to_svg(above, "t").find("stroke-dasharray") == std::string::npos);
}

TEST_CASE("experiments.interpolate_crossing") {
    CHECK(*interpolate_crossing({0, 1, 2}, {0.5, 0.9, 1.3}, 1.0) == doctest::Approx(1.25));
    CHECK_FALSE(interpolate_crossing({0, 1}, {0.2, 0.4}, 1.0).has_value());
}

TEST_CASE("experiments.fig3") {
    ExperimentConfig config;
    config.angle_grid_steps = 33;
    auto table = run_fig3(config);
    REQUIRE(table.header == std::vector<std::string>{"theta_a_rad", "s_99", "s_80"});
    REQUIRE(table.rows.size() == 33);
    auto s99 = table.column(1);
    auto s80 = table.column(2);
    // Row 8 is theta_a = pi/8.
    CHECK(table.rows[8][0] == doctest::Approx(std::numbers::pi / 8));
    CHECK(argmax(s99) == 8);
    CHECK(argmax(s80) == 8);
    CHECK(std::abs(s99[8] - 1.19) <= 0.02);
    CHECK(std::abs(s80[8] - 1.00) <= 0.02);
    CHECK(to_csv(table) == to_csv(run_fig3(config)));
}

TEST_CASE("experiments.fig4") {
    ExperimentConfig config;
    config.lambda_grid = {0.01, 1.2, 120};
    auto table = run_fig4(config);
    REQUIRE(table.header == std::vector<std::string>{"lambda", "s_10", "s_50", "s_80", "s_99"});
    auto lambdas = table.column(0);
    const double levels[] = {0.1, 0.5, 0.8, 0.99};
    for (size_t c = 1; c <= 4; c++) {
        double expected = std::tanh(squeezing_to_chi(levels[c - 1]));
        double step = lambdas[1] - lambdas[0];
        CHECK(std::abs(lambdas[argmax(table.column(c))] - expected) <= step);
    }
}

TEST_CASE("experiments.operating_point") {
    ExperimentConfig config;
    config.chi1 = 0.01;
    auto table = run_operating_point(config);
    REQUIRE(table.rows.size() == 1);
    const auto &row = table.rows[0];
    CHECK(row[table.column_index("eta")] == 0.9);
    CHECK(row[table.column_index("lambda_op")] == doctest::Approx(0.35136418446315326).epsilon(1e-12));
    CHECK(std::abs(row[table.column_index("s_ad")] - 1.0786) <= 0.002);
    CHECK(std::abs(row[table.column_index("s_ad")] - row[table.column_index("s_ad_analytic")]) <= 5e-4);
    CHECK(row[table.column_index("coincidence_ratio")] == doctest::Approx(0.1111).epsilon(1e-3));
}

TEST_CASE("experiments.threshold_scan") {
    ExperimentConfig config;
    config.chi1 = 0.01;
    config.eta_grid = {0.7, 1.0, 31};
    auto scan = run_threshold_scan(config);
    REQUIRE(scan.crossings.size() == 3);
    for (const auto &crossing : scan.crossings) {
        REQUIRE(crossing.has_value());
        CHECK(std::abs(*crossing - 0.8284) <= 0.005);
    }
}

TEST_CASE("experiments.no_coincidences_propagate") {
    ExperimentConfig config;
    config.chi1 = 0.0;
    config.angle_grid_steps = 3;
    CHECK_THROWS_AS(run_fig3(config), NoCoincidencesError);
}

TEST_CASE("experiments.selftest") {
    auto report = run_selftest();
    CHECK(report.passed);
    CHECK(report.text.find("FAIL") == std::string::npos);
    CHECK(report.text == run_selftest().text);

    SelfTestOptions corrupted;
    corrupted.gain_phase_sign = -kGainPhaseSign;
    auto bad = run_selftest(corrupted);
    CHECK_FALSE(bad.passed);
    CHECK(bad.text.find("commutator") != std::string::npos);
}
