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

#include "cvswap/optics_circuit.h"

#include <cmath>
#include <stdexcept>

namespace cvswap {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_finite_nonnegative(double x, const char *what) {
    if (!std::isfinite(x) || x < 0) {
        throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
    }
}

void require_efficiency(double eta) {
    if (!std::isfinite(eta) || eta < 0 || eta > 1) {
        throw std::invalid_argument("eta must lie in [0, 1]");
    }
}

}  // namespace

void SwapParams::validate() const {
    require_finite_nonnegative(chi1, "chi1");
    require_finite_nonnegative(chi2, "chi2");
    require_finite_nonnegative(lambda, "lambda");
    require_efficiency(eta);
}

FeedforwardGains FeedforwardGains::from_gain(double lambda, double phase_sign) {
    return FeedforwardGains{
        Complex{-lambda, 0},
        Complex{0, -phase_sign * lambda},
    };
}

void require_canonical(const LinearField &f, const char *what) {
    Complex c = commutator(f, f.adjoint());
    if (std::abs(c - Complex{1, 0}) > kCanonicalTolerance) {
        throw std::invalid_argument(std::string(what) + " is not a canonical mode: [F, F^dag] != 1");
    }
}

void require_independent(const LinearField &f, const LinearField &g, const char *what) {
    if (std::abs(commutator(f, g.adjoint())) > kCanonicalTolerance || std::abs(commutator(f, g)) > kCanonicalTolerance) {
        throw std::invalid_argument(std::string(what) + " inputs are not independent modes");
    }
}

std::pair<LinearField, LinearField> two_mode_squeezer(const LinearField &in1, const LinearField &in2, double chi) {
    require_finite_nonnegative(chi, "chi");
    require_canonical(in1, "two_mode_squeezer input 1");
    require_canonical(in2, "two_mode_squeezer input 2");
    require_independent(in1, in2, "two_mode_squeezer");
    double c = std::cosh(chi);
    double s = std::sinh(chi);
    return {
        in1 * c + in2.adjoint() * s,
        in2 * c + in1.adjoint() * s,
    };
}

std::pair<PolarizedBeam, PolarizedBeam> opo_type2(
    ModeRegistry &registry, double chi, const std::string &first, const std::string &second) {
    auto first_h = vacuum_field(registry.new_mode(first + "0_h"));
    auto first_v = vacuum_field(registry.new_mode(first + "0_v"));
    auto second_h = vacuum_field(registry.new_mode(second + "0_h"));
    auto second_v = vacuum_field(registry.new_mode(second + "0_v"));

    auto [out_first_h, out_second_v] = two_mode_squeezer(first_h, second_v, chi);
    auto [out_first_v, out_second_h] = two_mode_squeezer(first_v, second_h, chi);
    return {
        PolarizedBeam{std::move(out_first_h), std::move(out_first_v)},
        PolarizedBeam{std::move(out_second_h), std::move(out_second_v)},
    };
}

std::pair<LinearField, LinearField> beamsplitter_5050(const LinearField &f, const LinearField &g) {
    require_canonical(f, "beamsplitter input 1");
    require_canonical(g, "beamsplitter input 2");
    require_independent(f, g, "beamsplitter");
    return {(f + g) * kInvSqrt2, (f - g) * kInvSqrt2};
}

LinearField attenuator(const LinearField &f, double transmissivity, ModeRegistry &registry, const std::string &name) {
    if (!std::isfinite(transmissivity) || transmissivity < 0 || transmissivity > 1) {
        throw std::invalid_argument("transmissivity must lie in [0, 1]");
    }
    require_canonical(f, "attenuator input");
    auto vac = vacuum_field(registry.new_mode(name));
    return f * std::sqrt(transmissivity) + vac * std::sqrt(1 - transmissivity);
}

HomodyneCurrents homodyne_currents(
    const LinearField &b_pol,
    const LinearField &c_pol,
    double eta,
    ModeRegistry &registry,
    const std::string &label,
    LossModel loss_model) {
    require_efficiency(eta);
    auto [sum_port, diff_port] = beamsplitter_5050(b_pol, c_pol);

    LinearField loss_plus = vacuum_field(registry.new_mode("loss_plus_" + label));
    LinearField loss_minus = loss_model == LossModel::kPerDetector
                                 ? vacuum_field(registry.new_mode("loss_minus_" + label))
                                 : loss_plus;

    double leak = std::sqrt(1 - eta);
    double keep = std::sqrt(eta);
    return HomodyneCurrents{
        quadrature_plus(loss_plus) * leak + quadrature_plus(sum_port) * keep,
        quadrature_minus(loss_minus) * leak + quadrature_minus(diff_port) * keep,
    };
}

LinearField feedforward_displace(const LinearField &d, const HomodyneCurrents &currents, const FeedforwardGains &gains) {
    return d + (currents.x_plus * gains.plus + currents.x_minus * gains.minus) * kInvSqrt2;
}

PolarizedBeam halfwave_swap(const LinearField &d_prime_h, const LinearField &d_prime_v) {
    return PolarizedBeam{d_prime_v, d_prime_h};
}

SwapCircuitOutput build_swap_circuit(const SwapParams &params, const CircuitOptions &options) {
    params.validate();
    SwapCircuitOutput out;
    auto [beam_a, beam_b] = opo_type2(out.registry, params.chi1, "A", "B");
    auto [beam_c, beam_d] = opo_type2(out.registry, params.chi2, "C", "D");

    auto currents_h = homodyne_currents(beam_b.h, beam_c.h, params.eta, out.registry, "h", options.loss_model);
    auto currents_v = homodyne_currents(beam_b.v, beam_c.v, params.eta, out.registry, "v", options.loss_model);

    auto gains = FeedforwardGains::from_gain(params.lambda, options.gain_phase_sign);
    // Currents from each polarization drive the opposite polarization of D.
    auto d_prime_v = feedforward_displace(beam_d.v, currents_h, gains);
    auto d_prime_h = feedforward_displace(beam_d.h, currents_v, gains);

    out.beam_a = std::move(beam_a);
    out.beam_b = std::move(beam_b);
    out.beam_d_prime = halfwave_swap(d_prime_h, d_prime_v);
    return out;
}

LinearField single_mode_teleporter(const LinearField &a_in, double chi, double lambda, ModeRegistry &registry) {
    require_finite_nonnegative(chi, "chi");
    require_finite_nonnegative(lambda, "lambda");
    require_canonical(a_in, "teleporter input");
    auto a0 = vacuum_field(registry.new_mode("teleporter_A0"));
    auto b0 = vacuum_field(registry.new_mode("teleporter_B0"));
    double c = std::cosh(chi);
    double s = std::sinh(chi);
    return a_in * lambda + b0 * (c - lambda * s) - a0.adjoint() * (lambda * c - s);
}

}  // namespace cvswap
