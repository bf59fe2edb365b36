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

#ifndef CVSWAP_CH_METRICS_H
#define CVSWAP_CH_METRICS_H

#include <limits>
#include <stdexcept>

#include "cvswap/mode_algebra.h"
#include "cvswap/optics_circuit.h"

namespace cvswap {

/// Raised when the CH denominator vanishes (for example chi1 = 0).
class NoCoincidencesError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Which arm a polarization analyzer sits on.
///
/// The source arm uses E = cos(t) h + sin(t) v. The relay arm (beam B, or
/// the teleported beam D') uses the opposite handedness, E = cos(t) h -
/// sin(t) v. With matching handedness on both arms the pair amplitude of the
/// source goes as sin(t_a + t_b) and the standard angle set
/// (pi/8, -pi/4, 3pi/8, 0) gives S = 1/2; with the relay arm flipped it goes
/// as sin(t_a - t_b) and the same angles give S = (1 + sqrt2)/2.
enum class ArmSide { kSource, kRelay };

struct AnalyzerAngles {
    double theta_a = 0;
    double theta_b = 0;
    double theta_a_prime = 0;
    double theta_b_prime = 0;

    /// (pi/8, -pi/4, 3pi/8, 0).
    static AnalyzerAngles maximizing_set();
    /// One-parameter family t_a = -t_b/2 = t_a'/3, t_b' = 0.
    static AnalyzerAngles family(double theta_a);
};

struct CHResult {
    double r_ab = 0;
    double r_ab_prime = 0;
    double r_a_prime_b = 0;
    double r_a_prime_b_prime = 0;
    /// R(theta_a', -): both polarizations counted on the relay arm.
    double r_singles_a = 0;
    /// R(-, theta_b): both polarizations counted on the source arm.
    double r_singles_b = 0;
    double s = 0;
};

/// Tolerance on the imaginary part of a coincidence expectation.
inline constexpr double kRateImagTolerance = 1e-12;
/// Smallest CH denominator treated as a signal.
inline constexpr double kMinDenominator = 1e-30;

LinearField analyzer(const PolarizedBeam &beam, double theta, ArmSide side);

/// <e2^dag e1^dag e1 e2>. Throws std::logic_error if the expectation has a
/// non-negligible imaginary part.
double coincidence_rate(const LinearField &e1, const LinearField &e2);

/// <e1^dag e1> <e2^dag e2>: the coincidence rate two uncorrelated beams with
/// the same intensities would give.
double accidental_rate(const LinearField &e1, const LinearField &e2);

/// Coincidences between `e_other` and either polarization of `beam`.
double singles_rate(const LinearField &e_other, const PolarizedBeam &beam);

/// Coincidences between any polarization of `a` and any polarization of
/// `b`. Used as the rate unit when comparing with the closed forms.
double pair_rate(const PolarizedBeam &a, const PolarizedBeam &b);

/// Evaluates the CH ratio for a source beam and a relay beam.
CHResult ch_s(const PolarizedBeam &source, const PolarizedBeam &relay, const AnalyzerAngles &angles);
/// Shorthand for ch_s(circuit.beam_a, circuit.beam_d_prime, angles).
CHResult ch_s(const SwapCircuitOutput &circuit, const AnalyzerAngles &angles);

/// Inputs for the closed-form teleported rates.
struct AnalyticInputs {
    double s_ab = 0;
    double chi2 = 0;
    double lambda = 0;
    double eta = 1;

    /// sinh(chi2) - lambda sqrt(eta) cosh(chi2).
    double n() const;
};

/// lambda^2 eta r_ab + (N^2 + lambda^2 (1 - eta)) / 2. Rates are in units of
/// the total pair coincidence rate.
double analytic_rate_teleported(double r_ab, const AnalyticInputs &in);
/// lambda^2 eta r_singles + (N^2 + lambda^2 (1 - eta)).
double analytic_singles_teleported(double r_singles, const AnalyticInputs &in);

/// Closed-form S for beams A and D' given S for A and B.
/// Throws std::invalid_argument when lambda <= 0.
double analytic_s_ad(const AnalyticInputs &in);

/// tanh(chi2) / sqrt(eta). Throws std::invalid_argument unless eta in (0, 1].
double optimal_gain(double chi2, double eta);

/// Homodyne efficiency at and below which no violation survives: 1 / s_ab.
double eta_threshold(double s_ab);

/// -ln(1 - s) / 2 for a squeezed-quadrature variance reduction s in [0, 1).
double squeezing_to_chi(double squeezing);
/// Inverse of squeezing_to_chi.
double chi_to_squeezing(double chi);

/// Open interval of gains lambda > 0 where analytic_s_ad exceeds 1.
struct GainWindow {
    double lo = 0;
    double hi = 0;

    bool empty() const {
        return !(hi > lo);
    }
    double width() const {
        return empty() ? 0.0 : hi - lo;
    }
    bool contains(double lambda) const {
        return lambda > lo && lambda < hi;
    }
};

/// Solves analytic_s_ad(chi2, lambda, eta, s_ab) > 1 for lambda. The upper
/// end is +infinity when the condition holds for all large gains.
GainWindow gain_window(double chi2, double eta, double s_ab);

struct AngleScanResult {
    double theta_star = 0;
    double s_star = -std::numeric_limits<double>::infinity();
};

inline constexpr size_t kDefaultAngleSteps = 721;

/// Uniform scan of theta_a over [0, pi/2] along AnalyzerAngles::family.
/// Ties go to the smallest angle.
AngleScanResult maximize_s(const PolarizedBeam &source, const PolarizedBeam &relay, size_t steps = kDefaultAngleSteps);
AngleScanResult maximize_s(const SwapCircuitOutput &circuit, size_t steps = kDefaultAngleSteps);

}  // namespace cvswap

#endif
