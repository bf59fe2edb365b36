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

#include "cvswap/ch_metrics.h"
#include "cvswap/fock_oracle.h"
#include "doctest.h"

using namespace cvswap;

namespace {

double comm_error(const LinearField &f) {
    return std::abs(commutator(f, f.adjoint()) - Complex{1, 0});
}

// Largest coefficient difference between two fields.
double distance(const LinearField &f, const LinearField &g) {
    auto d = f - g;
    double worst = 0;
    for (const auto &kv : d.ann()) {
        worst = std::max(worst, std::abs(kv.second));
    }
    for (const auto &kv : d.cre()) {
        worst = std::max(worst, std::abs(kv.second));
    }
    return worst;
}

double mean_photons(const LinearField &f) {
    return vacuum_expectation({f.adjoint(), f}).real();
}

ModeId mode_named(const ModeRegistry &reg, const std::string &name) {
    for (auto id : reg.modes()) {
        if (reg.name(id) == name) {
            return id;
        }
    }
    throw std::out_of_range(name);
}

}  // namespace

TEST_CASE("optics.two_mode_squeezer") {
    ModeRegistry reg;
    auto a = vacuum_field(reg.new_mode("a"));
    auto b = vacuum_field(reg.new_mode("b"));

    auto [same_a, same_b] = two_mode_squeezer(a, b, 0.0);
    CHECK(same_a == a);
    CHECK(same_b == b);

    auto [out1, out2] = two_mode_squeezer(a, b, 0.34);
    // Number-basis oracle: <a^dag a> on the two-mode squeezed vacuum.
    auto state = build_source_state(0.34, 40, SourceForm::kExactProduct);
    std::pair<size_t, Complex> ah[] = {{state.mode_index("A_h"), 1.0}};
    double fock_mean = state.apply_annihilators(ah).norm();
    CHECK(mean_photons(out1) == doctest::Approx(fock_mean).epsilon(1e-10));
    CHECK(mean_photons(out1) == doctest::Approx(0.1201236811).epsilon(1e-9));

    for (double chi : {0.0, 0.1, 0.8, 2.3}) {
        auto [p, q] = two_mode_squeezer(a, b, chi);
        CHECK(comm_error(p) < 1e-12 * std::cosh(2 * chi));
        CHECK(comm_error(q) < 1e-12 * std::cosh(2 * chi));
        CHECK(std::abs(commutator(p, q.adjoint())) < 1e-12);
    }

    CHECK_THROWS_AS(two_mode_squeezer(a * 2.0, b, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(two_mode_squeezer(a, a, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(two_mode_squeezer(a, b, -0.1), std::invalid_argument);
}

TEST_CASE("optics.opo_type2_pairs_orthogonal_polarizations") {
    ModeRegistry reg;
    auto [a0, b0] = opo_type2(reg, 0.0);
    CHECK(a0.h == vacuum_field(mode_named(reg, "A0_h")));
    CHECK(b0.v == vacuum_field(mode_named(reg, "B0_v")));

    double chi = 0.3;
    auto [a, b] = opo_type2(reg, chi);
    CHECK(std::abs(pair_contraction(a.h, b.v) - std::cosh(chi) * std::sinh(chi)) < 1e-12);
    CHECK(std::abs(pair_contraction(a.v, b.h) - std::cosh(chi) * std::sinh(chi)) < 1e-12);
    CHECK(std::abs(pair_contraction(a.h, b.h)) < 1e-12);
    CHECK(std::abs(pair_contraction(a.v, b.v)) < 1e-12);
    CHECK(std::abs(commutator(a.h, a.v.adjoint())) < 1e-12);
}

TEST_CASE("optics.beamsplitter") {
    ModeRegistry reg;
    auto [a, b] = opo_type2(reg, 0.4);
    auto [c, d] = opo_type2(reg, 0.9, "C", "D");
    auto [o1, o2] = beamsplitter_5050(b.h, c.h);
    CHECK(mean_photons(o1) + mean_photons(o2) == doctest::Approx(mean_photons(b.h) + mean_photons(c.h)).epsilon(1e-12));
    CHECK(comm_error(o1) < 1e-12);
    CHECK(comm_error(o2) < 1e-12);
    CHECK(std::abs(commutator(o1, o2.adjoint())) < 1e-12);

    auto [back1, back2] = beamsplitter_5050(o1, o2);
    CHECK(distance(back1, b.h) < 1e-12);
    CHECK(distance(back2, c.h) < 1e-12);

    auto f = vacuum_field(reg.new_mode("f"));
    auto g = vacuum_field(reg.new_mode("g"));
    auto [p, q] = beamsplitter_5050(f, g);
    CHECK(std::abs(p.ann_coeff(*f.support().begin()) - 1 / std::sqrt(2.0)) < 1e-15);
    CHECK(comm_error(p) < 1e-12);
    CHECK(comm_error(q) < 1e-12);
    CHECK_THROWS_AS(beamsplitter_5050(f, f), std::invalid_argument);
}

TEST_CASE("optics.homodyne_currents") {
    ModeRegistry reg;
    auto [a, b] = opo_type2(reg, 0.2);
    auto [c, d] = opo_type2(reg, 0.6, "C", "D");

    auto ideal = homodyne_currents(b.h, c.h, 1.0, reg, "h");
    double r = 1 / std::sqrt(2.0);
    CHECK(distance(ideal.x_plus, (quadrature_plus(b.h) + quadrature_plus(c.h)) * r) < 1e-12);
    CHECK(distance(ideal.x_minus, (quadrature_minus(b.h) - quadrature_minus(c.h)) * r) < 1e-12);

    for (double eta : {0.0, 0.3, 0.83, 1.0}) {
        auto x = homodyne_currents(b.h, c.h, eta, reg, "h");
        CHECK(std::abs(commutator(x.x_plus, x.x_minus)) < 1e-12);
        CHECK(x.x_plus.adjoint() == x.x_plus);
        CHECK(x.x_minus.adjoint() == x.x_minus);
    }

    auto lost = homodyne_currents(b.h, c.h, 0.0, reg, "lost");
    CHECK(vacuum_expectation({lost.x_plus, lost.x_plus}).real() == doctest::Approx(1.0));
    CHECK(vacuum_expectation({lost.x_minus, lost.x_minus}).real() == doctest::Approx(1.0));
    CHECK(lost.x_plus.support().size() == 1);

    CHECK_THROWS_AS(homodyne_currents(b.h, c.h, 1.2, reg, "h"), std::invalid_argument);
    CHECK_THROWS_AS(homodyne_currents(b.h, c.h, -0.1, reg, "h"), std::invalid_argument);
}

TEST_CASE("optics.gain_phase_sign_is_frozen") {
    auto gains = FeedforwardGains::from_gain(0.7);
    CHECK(gains.plus == Complex{-0.7, 0});
    CHECK(gains.minus == Complex{0, 0.7});

    // With the frozen sign, B enters D' through its annihilation part.
    auto good = build_swap_circuit(SwapParams{0.2, 0.5, 0.7, 1.0});
    auto b0h = mode_named(good.registry, "B0_h");
    CHECK(std::abs(good.beam_d_prime.h.ann_coeff(b0h) + 0.7 * std::cosh(0.2)) < 1e-12);
    CHECK(comm_error(good.beam_d_prime.h) < 1e-12);

    CircuitOptions flipped;
    flipped.gain_phase_sign = -kGainPhaseSign;
    auto bad = build_swap_circuit(SwapParams{0.2, 0.5, 0.7, 1.0}, flipped);
    // The flipped sign still yields a canonical field, but B arrives as B^dag.
    CHECK(comm_error(bad.beam_d_prime.h) < 1e-12);
    CHECK(std::abs(bad.beam_d_prime.h.ann_coeff(b0h)) < 1e-15);
    CHECK(std::abs(commutator(good.beam_d_prime.h, good.beam_b.h.adjoint()) + 0.7) < 1e-12);
    CHECK(std::abs(commutator(bad.beam_d_prime.h, bad.beam_b.h.adjoint())) < 1e-12);
}

TEST_CASE("optics.feedforward_displace") {
    ModeRegistry reg;
    auto [a, b] = opo_type2(reg, 0.1);
    auto [c, d] = opo_type2(reg, 0.5, "C", "D");
    auto x = homodyne_currents(b.h, c.h, 0.8, reg, "h");
    CHECK(feedforward_displace(d.v, x, FeedforwardGains::from_gain(0.0)) == d.v);
    auto out = feedforward_displace(d.v, x, FeedforwardGains::from_gain(0.7));
    CHECK(comm_error(out) < 1e-12);

    double chi2 = 0.9;
    double lambda = 0.45;
    auto circuit = build_swap_circuit(SwapParams{0.1, chi2, lambda, 1.0});
    auto c0h = mode_named(circuit.registry, "C0_h");
    auto d0v = mode_named(circuit.registry, "D0_v");
    // D'_h is the displaced D_v, driven by the h currents.
    const auto &dh = circuit.beam_d_prime.h;
    CHECK(std::abs(std::abs(dh.cre_coeff(c0h)) - std::abs(std::sinh(chi2) - lambda * std::cosh(chi2))) < 1e-12);
    CHECK(std::abs(std::abs(dh.ann_coeff(d0v)) - std::abs(std::cosh(chi2) - lambda * std::sinh(chi2))) < 1e-12);
}

TEST_CASE("optics.halfwave_swap") {
    ModeRegistry reg;
    auto h = vacuum_field(reg.new_mode("h"));
    auto v = vacuum_field(reg.new_mode("v"));
    auto once = halfwave_swap(h, v);
    CHECK(once.h == v);
    CHECK(once.h.support() == v.support());
    auto twice = halfwave_swap(once.h, once.v);
    CHECK(twice.h == h);
    CHECK(twice.v == v);
}

TEST_CASE("optics.build_swap_circuit_structure") {
    auto circuit = build_swap_circuit(SwapParams{0.1, 0.5, 0.7, 0.9});
    CHECK(circuit.registry.size() == 12);

    // Beam A never touches OPO2 or the loss modes.
    for (auto id : circuit.beam_a.h.support()) {
        auto name = circuit.registry.name(id);
        CHECK((name[0] == 'A' || name[0] == 'B'));
    }
    // D'_h carries B_h content.
    auto b0h = mode_named(circuit.registry, "B0_h");
    auto b0v = mode_named(circuit.registry, "B0_v");
    CHECK(std::abs(circuit.beam_d_prime.h.ann_coeff(b0h)) > 0.1);
    CHECK(std::abs(circuit.beam_d_prime.h.ann_coeff(b0v)) == 0.0);

    SUBCASE("zero gain leaves the swapped resource beam") {
        auto c0 = build_swap_circuit(SwapParams{0.1, 0.5, 0.0, 1.0});
        ModeRegistry reg;
        opo_type2(reg, 0.1);
        auto [cc, dd] = opo_type2(reg, 0.5, "C", "D");
        CHECK(c0.beam_d_prime.h == dd.v);
        CHECK(c0.beam_d_prime.v == dd.h);
    }

    SUBCASE("optimal gain removes spurious creation") {
        for (double chi2 : {0.05, 0.34, 0.8, 2.3}) {
            double lambda = std::tanh(chi2);
            auto c = build_swap_circuit(SwapParams{0.1, chi2, lambda, 1.0});
            auto c0v = mode_named(c.registry, "C0_v");
            CHECK(std::abs(c.beam_d_prime.h.cre_coeff(c0v)) < 1e-12 * std::cosh(chi2));

            // D'_h = -lambda B_h + a single fresh vacuum of weight sqrt(1 - lambda^2).
            auto extra = c.beam_d_prime.h + c.beam_b.h * lambda;
            for (const auto &kv : extra.cre()) {
                CHECK(std::abs(kv.second) < 1e-12 * std::cosh(chi2));
            }
            double weight = 0;
            int terms = 0;
            for (const auto &kv : extra.ann()) {
                if (std::abs(kv.second) > 1e-12) {
                    terms++;
                    weight = std::abs(kv.second);
                }
            }
            CHECK(terms == 1);
            CHECK(weight == doctest::Approx(std::sqrt(1 - lambda * lambda)).epsilon(1e-12));
        }
    }

    SUBCASE("strong squeezing at unity gain reproduces B") {
        auto c = build_swap_circuit(SwapParams{0.1, 2.65, 1.0, 1.0});
        CHECK(distance(c.beam_d_prime.h, -c.beam_b.h) < 0.08);
        CHECK(distance(c.beam_d_prime.v, -c.beam_b.v) < 0.08);
    }

    SUBCASE("bypassing the teleporter reproduces the source") {
        ModeRegistry reg;
        auto [a, b] = opo_type2(reg, 0.1);
        CHECK(circuit.beam_a == a);
        CHECK(circuit.beam_b == b);
    }
}

TEST_CASE("optics.commutators_over_parameter_grid") {
    for (double chi2 : {0.0, 0.1, 0.34, 0.8, 2.3}) {
        for (double lambda : {0.0, 0.3, std::tanh(chi2), 1.0, 2.0}) {
            for (double eta : {0.5, 0.83, 0.9, 1.0}) {
                auto c = build_swap_circuit(SwapParams{0.1, chi2, lambda, eta});
                for (const auto *f : {&c.beam_a.h, &c.beam_a.v, &c.beam_d_prime.h, &c.beam_d_prime.v}) {
                    CHECK(comm_error(*f) < 1e-12);
                }
                CHECK(std::abs(commutator(c.beam_d_prime.h, c.beam_d_prime.v.adjoint())) < 1e-12);
                CHECK(std::abs(commutator(c.beam_d_prime.h, c.beam_d_prime.v)) < 1e-12);
            }
        }
    }
}

TEST_CASE("optics.single_mode_teleporter") {
    for (double chi : {0.0, 0.2, 0.7, 1.5}) {
        for (double lambda : {0.0, 0.4, 1.0, 1.7}) {
            ModeRegistry reg;
            auto in = vacuum_field(reg.new_mode("in"));
            auto out = single_mode_teleporter(in, chi, lambda, reg);
            CHECK(comm_error(out) < 1e-12 * std::cosh(2 * chi));
        }
    }

    ModeRegistry reg;
    auto in = vacuum_field(reg.new_mode("in"));
    double chi = 0.6;
    double lambda = std::tanh(chi);
    auto out = single_mode_teleporter(in, chi, lambda, reg);
    for (const auto &kv : out.cre()) {
        CHECK(std::abs(kv.second) < 1e-15);
    }
    CHECK(std::abs(out.ann_coeff(*in.support().begin()) - lambda) < 1e-15);
    auto b0 = ModeId{2};
    CHECK(reg.name(b0) == "teleporter_B0");
    CHECK(std::abs(out.ann_coeff(b0) - std::sqrt(1 - lambda * lambda)) < 1e-12);

    ModeRegistry reg2;
    auto in2 = vacuum_field(reg2.new_mode("in"));
    auto strong = single_mode_teleporter(in2, 8.0, 1.0, reg2);
    CHECK(distance(strong, in2) < 2 * std::exp(-8.0));
}

TEST_CASE("optics.two_polarization_circuit_is_two_single_mode_teleporters") {
    double chi2 = 0.7;
    double lambda = 0.55;
    auto c = build_swap_circuit(SwapParams{0.1, chi2, lambda, 1.0});
    ModeRegistry reg;
    auto in = vacuum_field(reg.new_mode("in"));
    auto single = single_mode_teleporter(in, chi2, lambda, reg);

    auto noise = c.beam_d_prime.h + c.beam_b.h * lambda;
    // D'_h is the swapped D'_v, so its resource noise comes from C0_h and D0_v.
    auto c0h = mode_named(c.registry, "C0_h");
    auto d0v = mode_named(c.registry, "D0_v");
    CHECK(std::abs(std::abs(single.ann_coeff(*in.support().begin())) - lambda) < 1e-12);
    CHECK(std::abs(std::abs(noise.cre_coeff(c0h)) - std::abs(single.cre_coeff(ModeId{1}))) < 1e-12);
    CHECK(std::abs(std::abs(noise.ann_coeff(d0v)) - std::abs(single.ann_coeff(ModeId{2}))) < 1e-12);
    size_t significant = 0;
    for (auto m : noise.support()) {
        significant += std::abs(noise.ann_coeff(m)) + std::abs(noise.cre_coeff(m)) > 1e-12 ? 1 : 0;
    }
    CHECK(significant == 2);
}

TEST_CASE("optics.shared_loss_mode_is_unphysical") {
    // A loss mode shared by the X+ and X- detectors makes the currents fail
    // to commute and breaks the output commutator; the per-detector model
    // keeps both.
    double eta = 0.8;
    CircuitOptions shared;
    shared.loss_model = LossModel::kSharedPerPolarization;
    auto c = build_swap_circuit(SwapParams{0.1, 0.5, 0.7, eta}, shared);
    CHECK(comm_error(c.beam_d_prime.h) > 1e-3);

    ModeRegistry reg;
    auto [a, b] = opo_type2(reg, 0.1);
    auto [cc, dd] = opo_type2(reg, 0.5, "C", "D");
    auto x = homodyne_currents(b.h, cc.h, eta, reg, "h", LossModel::kSharedPerPolarization);
    CHECK(std::abs(commutator(x.x_plus, x.x_minus) - Complex{0, -2 * (1 - eta)}) < 1e-12);
}
