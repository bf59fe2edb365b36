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

#include "cvswap/mode_algebra.h"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cvswap {

namespace {

void prune(LinearField::CoeffMap &m) {
    std::erase_if(m, [](const auto &kv) {
        return kv.second == Complex{0, 0};
    });
}

void accumulate(LinearField::CoeffMap &dst, const LinearField::CoeffMap &src, double sign) {
    for (const auto &[mode, coeff] : src) {
        auto it = dst.find(mode);
        if (it == dst.end()) {
            dst.emplace(mode, sign * coeff);
        } else {
            it->second += sign * coeff;
            if (it->second == Complex{0, 0}) {
                dst.erase(it);
            }
        }
    }
}

Complex lookup(const LinearField::CoeffMap &m, ModeId id) {
    auto it = m.find(id);
    return it == m.end() ? Complex{0, 0} : it->second;
}

// sum_i x[i] * y[i] over the modes both maps share.
Complex overlap(const LinearField::CoeffMap &x, const LinearField::CoeffMap &y) {
    Complex total{0, 0};
    auto a = x.begin();
    auto b = y.begin();
    while (a != x.end() && b != y.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            total += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return total;
}

}  // namespace

ModeId ModeRegistry::new_mode(std::string name) {
    if (name.empty()) {
        throw std::invalid_argument("mode name must be nonempty");
    }
    ModeId id{static_cast<uint32_t>(names_.size())};
    names_.push_back(std::move(name));
    return id;
}

const std::string &ModeRegistry::name(ModeId id) const {
    if (id.index >= names_.size()) {
        throw std::out_of_range("mode id was not issued by this registry");
    }
    return names_[id.index];
}

std::vector<ModeId> ModeRegistry::modes() const {
    std::vector<ModeId> out;
    out.reserve(names_.size());
    for (uint32_t k = 0; k < names_.size(); k++) {
        out.push_back(ModeId{k});
    }
    return out;
}

LinearField::LinearField(CoeffMap ann, CoeffMap cre) : ann_(std::move(ann)), cre_(std::move(cre)) {
    prune(ann_);
    prune(cre_);
}

LinearField LinearField::vacuum(ModeId m) {
    return LinearField({{m, Complex{1, 0}}}, {});
}

Complex LinearField::ann_coeff(ModeId m) const {
    return lookup(ann_, m);
}

Complex LinearField::cre_coeff(ModeId m) const {
    return lookup(cre_, m);
}

std::set<ModeId> LinearField::support() const {
    std::set<ModeId> out;
    for (const auto &kv : ann_) {
        out.insert(kv.first);
    }
    for (const auto &kv : cre_) {
        out.insert(kv.first);
    }
    return out;
}

LinearField LinearField::adjoint() const {
    LinearField out;
    for (const auto &[mode, coeff] : ann_) {
        out.cre_.emplace(mode, std::conj(coeff));
    }
    for (const auto &[mode, coeff] : cre_) {
        out.ann_.emplace(mode, std::conj(coeff));
    }
    return out;
}

LinearField &LinearField::operator+=(const LinearField &other) {
    accumulate(ann_, other.ann_, +1);
    accumulate(cre_, other.cre_, +1);
    return *this;
}

LinearField &LinearField::operator-=(const LinearField &other) {
    accumulate(ann_, other.ann_, -1);
    accumulate(cre_, other.cre_, -1);
    return *this;
}

LinearField &LinearField::operator*=(Complex c) {
    for (auto &kv : ann_) {
        kv.second *= c;
    }
    for (auto &kv : cre_) {
        kv.second *= c;
    }
    prune(ann_);
    prune(cre_);
    return *this;
}

std::string LinearField::str(const ModeRegistry *registry) const {
    std::ostringstream out;
    bool first = true;
    auto emit = [&](const CoeffMap &m, const char *suffix) {
        for (const auto &[mode, coeff] : m) {
            if (!first) {
                out << " + ";
            }
            first = false;
            char buf[96];
            std::snprintf(buf, sizeof(buf), "(%.6g%+.6gi)", coeff.real(), coeff.imag());
            out << buf << "*";
            if (registry != nullptr) {
                out << registry->name(mode);
            } else {
                out << "m" << mode.index;
            }
            out << suffix;
        }
    };
    emit(ann_, "");
    emit(cre_, "^dag");
    if (first) {
        out << "0";
    }
    return out.str();
}

LinearField operator+(LinearField a, const LinearField &b) {
    return a += b;
}

LinearField operator-(LinearField a, const LinearField &b) {
    return a -= b;
}

LinearField operator-(LinearField a) {
    return a *= Complex{-1, 0};
}

LinearField operator*(LinearField a, Complex c) {
    return a *= c;
}

LinearField operator*(Complex c, LinearField a) {
    return a *= c;
}

Complex commutator(const LinearField &f, const LinearField &g) {
    return overlap(f.ann(), g.cre()) - overlap(f.cre(), g.ann());
}

Complex pair_contraction(const LinearField &f, const LinearField &g) {
    return overlap(f.ann(), g.cre());
}

LinearField quadrature_plus(const LinearField &f) {
    return f + f.adjoint();
}

LinearField quadrature_minus(const LinearField &f) {
    return Complex{0, 1} * (f - f.adjoint());
}

namespace {

void enumerate_matchings(
    std::vector<bool> &used,
    std::vector<std::pair<size_t, size_t>> &pairs,
    uint64_t &count,
    const std::function<void(std::span<const std::pair<size_t, size_t>>)> &visit) {
    size_t first = 0;
    while (first < used.size() && used[first]) {
        first++;
    }
    if (first == used.size()) {
        count++;
        visit(pairs);
        return;
    }
    used[first] = true;
    for (size_t j = first + 1; j < used.size(); j++) {
        if (used[j]) {
            continue;
        }
        used[j] = true;
        pairs.emplace_back(first, j);
        enumerate_matchings(used, pairs, count, visit);
        pairs.pop_back();
        used[j] = false;
    }
    used[first] = false;
}

}  // namespace

uint64_t for_each_matching(size_t size, const std::function<void(std::span<const std::pair<size_t, size_t>>)> &visit) {
    if (size % 2 != 0) {
        return 0;
    }
    std::vector<bool> used(size, false);
    std::vector<std::pair<size_t, size_t>> pairs;
    pairs.reserve(size / 2);
    uint64_t count = 0;
    enumerate_matchings(used, pairs, count, visit);
    return count;
}

Complex vacuum_expectation(std::span<const LinearField> product) {
    const size_t n = product.size();
    if (n % 2 != 0) {
        return {0, 0};
    }
    // Contractions depend only on the ordered pair of positions.
    std::vector<Complex> contraction(n * n, Complex{0, 0});
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            contraction[i * n + j] = pair_contraction(product[i], product[j]);
        }
    }
    Complex total{0, 0};
    for_each_matching(n, [&](std::span<const std::pair<size_t, size_t>> pairs) {
        Complex term{1, 0};
        for (const auto &[i, j] : pairs) {
            term *= contraction[i * n + j];
        }
        total += term;
    });
    return total;
}

Complex vacuum_expectation(std::initializer_list<LinearField> product) {
    return vacuum_expectation(std::span<const LinearField>(product.begin(), product.size()));
}

}  // namespace cvswap
