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

#include "cvswap/ch_metrics.h"

#include <cmath>
#include <numbers>
#include <string>

namespace cvswap {

AnalyzerAngles AnalyzerAngles::maximizing_set() {
    return family(std::numbers::pi / 8);
}

AnalyzerAngles AnalyzerAngles::family(double theta_a) {
    return AnalyzerAngles{theta_a, -2 * theta_a, 3 * theta_a, 0.0};
}

LinearField analyzer(const PolarizedBeam &beam, double theta, ArmSide side) {
    double handed = side == ArmSide::kSource ? 1.0 : -1.0;
    return beam.h * std::cos(theta) + beam.v * (handed * std::sin(theta));
}

double coincidence_rate(const LinearField &e1, const LinearField &e2) {
    Complex value = vacuum_expectation({e2.adjoint(), e1.adjoint(), e1, e2});
    if (std::abs(value.imag()) > kRateImagTolerance) {
        throw std::logic_error("coincidence expectation has imaginary part " + std::to_string(value.imag()));
    }
    return value.real();
}

double accidental_rate(const LinearField &e1, const LinearField &e2) {
    double n1 = vacuum_expectation({e1.adjoint(), e1}).real();
    double n2 = vacuum_expectation({e2.adjoint(), e2}).real();
    return n1 * n2;
}

double singles_rate(const LinearField &e_other, const PolarizedBeam &beam) {
    return coincidence_rate(e_other, beam.h) + coincidence_rate(e_other, beam.v);
}

double pair_rate(const PolarizedBeam &a, const PolarizedBeam &b) {
    return singles_rate(a.h, b) + singles_rate(a.v, b);
}

CHResult ch_s(const PolarizedBeam &source, const PolarizedBeam &relay, const AnalyzerAngles &angles) {
    auto ea = analyzer(source, angles.theta_a, ArmSide::kSource);
    auto ea_prime = analyzer(source, angles.theta_a_prime, ArmSide::kSource);
    auto eb = analyzer(relay, angles.theta_b, ArmSide::kRelay);
    auto eb_prime = analyzer(relay, angles.theta_b_prime, ArmSide::kRelay);

    CHResult r;
    r.r_ab = coincidence_rate(ea, eb);
    r.r_ab_prime = coincidence_rate(ea, eb_prime);
    r.r_a_prime_b = coincidence_rate(ea_prime, eb);
    r.r_a_prime_b_prime = coincidence_rate(ea_prime, eb_prime);
    r.r_singles_a = singles_rate(ea_prime, relay);
    r.r_singles_b = coincidence_rate(source.h, eb) + coincidence_rate(source.v, eb);

    double denominator = r.r_singles_a + r.r_singles_b;
    if (!(denominator > kMinDenominator)) {
        throw NoCoincidencesError("CH denominator vanishes; no coincidences between the beams");
    }
    r.s = (r.r_ab - r.r_ab_prime + r.r_a_prime_b + r.r_a_prime_b_prime) / denominator;
    return r;
}

CHResult ch_s(const SwapCircuitOutput &circuit, const AnalyzerAngles &angles) {
    return ch_s(circuit.beam_a, circuit.beam_d_prime, angles);
}

double AnalyticInputs::n() const {
    return std::sinh(chi2) - lambda * std::sqrt(eta) * std::cosh(chi2);
}

namespace {

double noise_offset(const AnalyticInputs &in) {
    double n = in.n();
    return n * n + in.lambda * in.lambda * (1 - in.eta);
}

}  // namespace

double analytic_rate_teleported(double r_ab, const AnalyticInputs &in) {
    return in.lambda * in.lambda * in.eta * r_ab + noise_offset(in) / 2;
}

double analytic_singles_teleported(double r_singles, const AnalyticInputs &in) {
    return in.lambda * in.lambda * in.eta * r_singles + noise_offset(in);
}

double analytic_s_ad(const AnalyticInputs &in) {
    if (!(in.lambda > 0)) {
        throw std::invalid_argument("analytic_s_ad requires lambda > 0");
    }
    double n = in.n();
    double ratio = n * n / (in.lambda * in.lambda);
    return (ratio + in.eta * in.s_ab + 1 - in.eta) / (2 * ratio + 2 - in.eta);
}

double optimal_gain(double chi2, double eta) {
    if (!(eta > 0 && eta <= 1)) {
        throw std::invalid_argument("optimal_gain requires eta in (0, 1]");
    }
    return std::tanh(chi2) / std::sqrt(eta);
}

double eta_threshold(double s_ab) {
    if (!(s_ab > 0)) {
        throw std::invalid_argument("eta_threshold requires s_ab > 0");
    }
    return 1 / s_ab;
}

double squeezing_to_chi(double squeezing) {
    if (!(squeezing >= 0 && squeezing < 1)) {
        throw std::invalid_argument("squeezing must lie in [0, 1)");
    }
    return -std::log1p(-squeezing) / 2;
}

double chi_to_squeezing(double chi) {
    return -std::expm1(-2 * chi);
}

GainWindow gain_window(double chi2, double eta, double s_ab) {
    // S_AD' > 1  <=>  N^2 / lambda^2 < eta s_ab - 1
    //            <=>  |sinh - lambda sqrt(eta) cosh| < lambda sqrt(eta s_ab - 1).
    double margin = eta * s_ab - 1;
    if (!(margin > 0)) {
        return {};
    }
    double r = std::sqrt(margin);
    double k = std::sqrt(eta) * std::cosh(chi2);
    double s = std::sinh(chi2);
    const double inf = std::numeric_limits<double>::infinity();
    if (s == 0) {
        return k < r ? GainWindow{0, inf} : GainWindow{};
    }
    double lo = s / (k + r);
    double hi = k > r ? s / (k - r) : inf;
    return GainWindow{lo, hi};
}

AngleScanResult maximize_s(const PolarizedBeam &source, const PolarizedBeam &relay, size_t steps) {
    if (steps < 2) {
        throw std::invalid_argument("angle scan needs at least 2 points");
    }
    AngleScanResult best;
    for (size_t k = 0; k < steps; k++) {
        double theta = (std::numbers::pi / 2) * static_cast<double>(k) / static_cast<double>(steps - 1);
        double s = ch_s(source, relay, AnalyzerAngles::family(theta)).s;
        if (s > best.s_star) {
            best = AngleScanResult{theta, s};
        }
    }
    return best;
}

AngleScanResult maximize_s(const SwapCircuitOutput &circuit, size_t steps) {
    return maximize_s(circuit.beam_a, circuit.beam_d_prime, steps);
}

}  // namespace cvswap
