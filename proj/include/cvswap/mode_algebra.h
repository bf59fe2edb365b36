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

#ifndef CVSWAP_MODE_ALGEBRA_H
#define CVSWAP_MODE_ALGEBRA_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cvswap {

using Complex = std::complex<double>;

/// Names one independent vacuum input mode. Only a ModeRegistry issues these.
struct ModeId {
    uint32_t index = 0;

    auto operator<=>(const ModeId &) const = default;
};

/// Hands out fresh vacuum modes during circuit construction.
class ModeRegistry {
   public:
    ModeId new_mode(std::string name);
    size_t size() const {
        return names_.size();
    }
    const std::string &name(ModeId id) const;
    std::vector<ModeId> modes() const;

   private:
    std::vector<std::string> names_;
};

/// A field operator written as sum_i (ann_i a_i + cre_i a_i^dagger) over
/// independent vacuum modes. Entries whose coefficient is exactly zero are
/// never stored, so two fields compare equal iff they have identical
/// coefficient maps.
class LinearField {
   public:
    using CoeffMap = std::map<ModeId, Complex>;

    LinearField() = default;
    LinearField(CoeffMap ann, CoeffMap cre);

    /// The bare annihilation operator of mode `m`.
    static LinearField vacuum(ModeId m);

    const CoeffMap &ann() const {
        return ann_;
    }
    const CoeffMap &cre() const {
        return cre_;
    }
    Complex ann_coeff(ModeId m) const;
    Complex cre_coeff(ModeId m) const;

    bool is_zero() const {
        return ann_.empty() && cre_.empty();
    }
    std::set<ModeId> support() const;

    LinearField adjoint() const;

    LinearField &operator+=(const LinearField &other);
    LinearField &operator-=(const LinearField &other);
    LinearField &operator*=(Complex c);

    bool operator==(const LinearField &other) const = default;

    std::string str(const ModeRegistry *registry = nullptr) const;

   private:
    CoeffMap ann_;
    CoeffMap cre_;
};

LinearField operator+(LinearField a, const LinearField &b);
LinearField operator-(LinearField a, const LinearField &b);
LinearField operator-(LinearField a);
LinearField operator*(LinearField a, Complex c);
LinearField operator*(Complex c, LinearField a);

inline LinearField vacuum_field(ModeId m) {
    return LinearField::vacuum(m);
}
inline LinearField adjoint(const LinearField &f) {
    return f.adjoint();
}
inline LinearField scale(LinearField f, Complex c) {
    return f *= c;
}
inline LinearField add(LinearField f, const LinearField &g) {
    return f += g;
}

/// The scalar [F, G].
Complex commutator(const LinearField &f, const LinearField &g);

/// <0|F G|0>.
Complex pair_contraction(const LinearField &f, const LinearField &g);

/// X+ = F + F^dagger.
LinearField quadrature_plus(const LinearField &f);
/// X- = i (F - F^dagger).
LinearField quadrature_minus(const LinearField &f);

/// Visits every perfect matching of positions [0, 2k). Each matching is
/// passed as k pairs (i, j) with i < j, first position paired first.
/// Returns the number of matchings visited, which is (2k-1)!!.
uint64_t for_each_matching(size_t size, const std::function<void(std::span<const std::pair<size_t, size_t>>)> &visit);

/// Vacuum expectation <0|F_1 F_2 ... F_n|0> by Wick pairing. Operator order
/// is preserved; odd-length products vanish and the empty product is 1.
Complex vacuum_expectation(std::span<const LinearField> product);
Complex vacuum_expectation(std::initializer_list<LinearField> product);

}  // namespace cvswap

#endif
