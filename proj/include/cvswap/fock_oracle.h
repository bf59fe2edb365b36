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

// Reference engines that share no code path with the Wick evaluator: a
// symbolic normal-ordering rewriter and a truncated number-basis simulator
// of the photon-pair source.

#ifndef CVSWAP_FOCK_ORACLE_H
#define CVSWAP_FOCK_ORACLE_H

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cvswap/mode_algebra.h"

namespace cvswap {

enum class OpKind : uint8_t { kCreate = 0, kAnnihilate = 1 };

struct LadderOp {
    ModeId mode;
    OpKind kind;

    auto operator<=>(const LadderOp &) const = default;
};

using OpWord = std::vector<LadderOp>;

struct NormalOrderTerm {
    Complex coefficient;
    OpWord word;
};

/// True when every creator precedes every annihilator.
bool is_normal_ordered(const OpWord &word);

/// Rewrites `word` with a_i a_j^dag -> a_j^dag a_i + delta_ij until it is
/// normal ordered. Creators and annihilators are then sorted by mode, so
/// equal operators collect into one term.
std::vector<NormalOrderTerm> normal_order(const OpWord &word);

inline constexpr size_t kMaxOracleProductLength = 10;

/// Vacuum expectation of an ordered product of linear fields, computed by
/// expanding into ladder-operator words and normal ordering.
/// Throws std::invalid_argument for products longer than
/// kMaxOracleProductLength.
Complex normal_order_expectation(std::span<const LinearField> product);

/// A truncated number-basis state over labeled modes.
class FockState {
   public:
    using Occupation = std::vector<int>;

    FockState(std::vector<std::string> modes, int cutoff, bool truncated);

    const std::vector<std::string> &modes() const {
        return modes_;
    }
    int cutoff() const {
        return cutoff_;
    }
    /// Whether construction dropped components beyond the cutoff.
    bool truncated() const {
        return truncated_;
    }
    const std::map<Occupation, Complex> &amplitudes() const {
        return amplitudes_;
    }
    size_t mode_index(const std::string &label) const;

    void add_amplitude(const Occupation &occ, Complex amp);
    Complex amplitude(const Occupation &occ) const;

    /// <psi|psi>.
    double norm() const;

    /// Largest |amplitude| among components with some mode at the cutoff.
    double max_boundary_amplitude() const;

    /// Applies sum_k coeff_k a_k for the given (mode index, coeff) pairs.
    FockState apply_annihilators(std::span<const std::pair<size_t, Complex>> combo) const;

   private:
    std::vector<std::string> modes_;
    int cutoff_;
    bool truncated_;
    std::map<Occupation, Complex> amplitudes_;
};

enum class SourceForm {
    /// sum_n tanh(chi)^n (|n_h, n_v> + |n_v, n_h>), with the two coincident
    /// n = 0 kets merged into one vacuum term and the sum normalized.
    kTruncatedSum,
    /// |0> + (chi/sqrt2)(|1_h, 1_v> + |1_v, 1_h>), the first-order pair
    /// state taken literally (norm 1 + chi^2).
    kLowGainPair,
    /// The product of two two-mode squeezed vacua on (A_h, B_v) and (A_v, B_h).
    kExactProduct,
};

inline constexpr int kDefaultCutoff = 12;
inline constexpr double kBoundaryTolerance = 1e-8;

/// Builds the source state over modes {A_h, A_v, B_h, B_v}.
FockState build_source_state(double chi1, int n_max, SourceForm form);

/// <psi| E_A^dag E_B^dag E_B E_A |psi> with E_A = cos(t_a) A_h + sin(t_a) A_v
/// and E_B = cos(t_b) B_h - sin(t_b) B_v. Throws std::runtime_error when a
/// truncated state has boundary amplitudes above kBoundaryTolerance.
double fock_coincidence_rate(const FockState &state, double theta_a, double theta_b);

/// Coincidences between analyzer t_a on A and both polarizations of B.
double fock_singles_rate_a(const FockState &state, double theta_a);
/// Coincidences between both polarizations of A and analyzer t_b on B.
double fock_singles_rate_b(const FockState &state, double theta_b);

}  // namespace cvswap

#endif
