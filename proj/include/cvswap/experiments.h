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

#ifndef CVSWAP_EXPERIMENTS_H
#define CVSWAP_EXPERIMENTS_H

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cvswap/ch_metrics.h"
#include "cvswap/optics_circuit.h"

namespace cvswap {

/// Bad configuration or flag values. Maps to exit code 1.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double min = 0;
    double max = 1;
    size_t steps = 2;

    double at(size_t k) const;
};

struct ExperimentConfig {
    double chi1 = 0.1;
    /// Empty means each command uses its own default levels.
    std::vector<double> squeezing_levels;
    /// Unset means 1.0, except operating-point which defaults to 0.9.
    std::optional<double> eta;
    GridSpec lambda_grid{0.01, 2.0, 400};
    GridSpec eta_grid{0.5, 1.0, 101};
    size_t angle_grid_steps = kDefaultAngleSteps;
    std::string output_dir;
    bool emit_svg = false;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

/// Applies `key = value` lines ('#' starts a comment). Unknown keys and
/// malformed values throw ConfigError. `squeezing` may list several
/// comma-separated levels.
void apply_config_text(ExperimentConfig &config, std::string_view text);
ExperimentConfig load_config_file(const std::string &path);

/// A numeric table with a mandatory header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(size_t k) const;
    size_t column_index(const std::string &name) const;
};

/// Nine significant digits, C locale.
std::string format_number(double x);
/// Comma separated, header row first, LF line endings.
std::string to_csv(const Table &table);
/// One polyline per non-x column.
std::string to_svg(const Table &table, const std::string &title);

/// "s_99", "s_12.5", ...
std::string squeezing_column_name(double squeezing);

/// S_AD' versus theta_a along the maximizing angle family at unity gain.
Table run_fig3(const ExperimentConfig &config);
/// S_AD' versus lambda at the maximizing angles.
Table run_fig4(const ExperimentConfig &config);
/// One row per squeezing level at the optimal gain.
Table run_operating_point(const ExperimentConfig &config);

struct ThresholdScan {
    Table table;
    /// Interpolated S = 1 crossing per squeezing level, in column order.
    std::vector<std::optional<double>> crossings;
};
/// S_AD' versus eta at the optimal gain.
ThresholdScan run_threshold_scan(const ExperimentConfig &config);

/// First x where the linear interpolant of ys crosses `level`.
std::optional<double> interpolate_crossing(const std::vector<double> &xs, const std::vector<double> &ys, double level);

/// Random product of `length` fields over `modes` modes, every coefficient
/// with magnitude at most `max_coeff`.
std::vector<LinearField> random_field_product(std::mt19937_64 &rng, size_t length, size_t modes, double max_coeff);

struct SelfTestOptions {
    double gain_phase_sign = kGainPhaseSign;
};

struct SelfTestReport {
    bool passed = true;
    std::string text;
};

/// Runs the invariant and oracle-equivalence checks, stopping at the first
/// failure. The report text is deterministic.
SelfTestReport run_selftest(const SelfTestOptions &options = {});

}  // namespace cvswap

#endif
