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

#ifndef CVSWAP_OPTICS_CIRCUIT_H
#define CVSWAP_OPTICS_CIRCUIT_H

#include <string>
#include <utility>

#include "cvswap/mode_algebra.h"

namespace cvswap {

/// Tolerance used when components check that their inputs are canonical.
inline constexpr double kCanonicalTolerance = 1e-9;

/// One spatial beam split into horizontal and vertical polarization fields.
struct PolarizedBeam {
    LinearField h;
    LinearField v;

    bool operator==(const PolarizedBeam &) const = default;
};

/// Experiment configuration. chi1/chi2 are the conversion efficiencies of the
/// source and resource parametric oscillators, lambda the real feedforward
/// gain and eta the homodyne efficiency.
struct SwapParams {
    double chi1 = 0.1;
    double chi2 = 0.0;
    double lambda = 1.0;
    double eta = 1.0;

    /// Throws std::invalid_argument on non-finite or out-of-range values.
    void validate() const;
};

/// Sign of the phase given to the minus-quadrature gain. With the splitter
/// and quadrature conventions used here, -1 makes the feedforward deliver
/// the annihilation part of the input beam; +1 would deliver its adjoint
/// and break the commutation relations of the output.
inline constexpr double kGainPhaseSign = -1.0;

/// Complex gains applied to the two photocurrents. The local-oscillator
/// amplitude is absorbed into these.
struct FeedforwardGains {
    Complex plus;
    Complex minus;

    /// lambda_plus = -lambda, lambda_minus = -i * sign * lambda.
    static FeedforwardGains from_gain(double lambda, double phase_sign = kGainPhaseSign);
};

/// How vacuum noise from detector inefficiency enters the two photocurrents
/// of one polarization.
enum class LossModel {
    /// An independent loss mode per detector (four in the full circuit).
    kPerDetector,
    /// One loss mode shared by the X+ and X- detectors. Kept for comparison
    /// only; it makes the two currents fail to commute.
    kSharedPerPolarization,
};

struct HomodyneCurrents {
    LinearField x_plus;
    LinearField x_minus;
};

/// Throws std::invalid_argument unless [f, f^dag] = 1 within tolerance.
void require_canonical(const LinearField &f, const char *what);
/// Throws std::invalid_argument unless f and g are independent modes.
void require_independent(const LinearField &f, const LinearField &g, const char *what);

/// out1 = in1 cosh(chi) + in2^dag sinh(chi), out2 = in2 cosh(chi) + in1^dag sinh(chi).
std::pair<LinearField, LinearField> two_mode_squeezer(const LinearField &in1, const LinearField &in2, double chi);

/// Type-II parametric oscillator fed by four fresh vacuum modes. Returns the
/// two output beams; h of the first beam is squeezed with v of the second
/// and vice versa.
std::pair<PolarizedBeam, PolarizedBeam> opo_type2(
    ModeRegistry &registry, double chi, const std::string &first = "A", const std::string &second = "B");

/// Lossless symmetric splitter: ((F+G)/sqrt2, (F-G)/sqrt2).
std::pair<LinearField, LinearField> beamsplitter_5050(const LinearField &f, const LinearField &g);

/// Splitter of power transmissivity `transmissivity` with a fresh vacuum in
/// the unused port; returns the transmitted field.
LinearField attenuator(const LinearField &f, double transmissivity, ModeRegistry &registry, const std::string &name);

/// Dual homodyne detection of b_pol mixed with c_pol. X+ is read on the sum
/// port and X- on the difference port, each through a detector of
/// efficiency eta.
HomodyneCurrents homodyne_currents(
    const LinearField &b_pol,
    const LinearField &c_pol,
    double eta,
    ModeRegistry &registry,
    const std::string &label,
    LossModel loss_model = LossModel::kPerDetector);

/// d + (lambda_plus x_plus + lambda_minus x_minus) / sqrt2.
LinearField feedforward_displace(const LinearField &d, const HomodyneCurrents &currents, const FeedforwardGains &gains);

/// Half-wave plate at 45 degrees: exchanges the polarization labels.
PolarizedBeam halfwave_swap(const LinearField &d_prime_h, const LinearField &d_prime_v);

struct SwapCircuitOutput {
    PolarizedBeam beam_a;
    /// Beam B as it leaves the source, before teleportation.
    PolarizedBeam beam_b;
    PolarizedBeam beam_d_prime;
    ModeRegistry registry;
};

/// Knobs used by tests and the self-test to perturb the circuit.
struct CircuitOptions {
    double gain_phase_sign = kGainPhaseSign;
    LossModel loss_model = LossModel::kPerDetector;
};

/// Builds the complete swapping network and returns beams A, B and D'.
SwapCircuitOutput build_swap_circuit(const SwapParams &params, const CircuitOptions &options = {});

/// Ideal single-mode teleporter acting on `a_in` with resource squeezing chi
/// and gain lambda:
///   lambda a_in + (cosh chi - lambda sinh chi) B0 - (lambda cosh chi - sinh chi) A0^dag.
LinearField single_mode_teleporter(const LinearField &a_in, double chi, double lambda, ModeRegistry &registry);

}  // namespace cvswap

#endif
