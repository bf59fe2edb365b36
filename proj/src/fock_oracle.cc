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

#include "cvswap/fock_oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvswap {

bool is_normal_ordered(const OpWord &word) {
    bool seen_annihilator = false;
    for (const auto &op : word) {
        if (op.kind == OpKind::kAnnihilate) {
            seen_annihilator = true;
        } else if (seen_annihilator) {
            return false;
        }
    }
    return true;
}

namespace {

void canonicalize(OpWord &word) {
    // Normal ordered: creators form a prefix. Each block commutes internally.
    auto split = std::find_if(word.begin(), word.end(), [](const LadderOp &op) {
        return op.kind == OpKind::kAnnihilate;
    });
    std::sort(word.begin(), split);
    std::sort(split, word.end());
}

using Polynomial = std::map<OpWord, Complex>;

void add_term(Polynomial &poly, const OpWord &word, Complex coeff) {
    if (coeff == Complex{0, 0}) {
        return;
    }
    auto [it, inserted] = poly.emplace(word, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == Complex{0, 0}) {
            poly.erase(it);
        }
    }
}

void normal_order_into(Polynomial &out, const OpWord &word, Complex coeff) {
    std::vector<NormalOrderTerm> pending{{coeff, word}};
    while (!pending.empty()) {
        NormalOrderTerm term = std::move(pending.back());
        pending.pop_back();
        size_t k = 0;
        for (; k + 1 < term.word.size(); k++) {
            if (term.word[k].kind == OpKind::kAnnihilate && term.word[k + 1].kind == OpKind::kCreate) {
                break;
            }
        }
        if (k + 1 >= term.word.size()) {
            canonicalize(term.word);
            add_term(out, term.word, term.coefficient);
            continue;
        }
        if (term.word[k].mode == term.word[k + 1].mode) {
            OpWord contracted;
            contracted.reserve(term.word.size() - 2);
            contracted.insert(contracted.end(), term.word.begin(), term.word.begin() + k);
            contracted.insert(contracted.end(), term.word.begin() + k + 2, term.word.end());
            pending.push_back({term.coefficient, std::move(contracted)});
        }
        std::swap(term.word[k], term.word[k + 1]);
        pending.push_back(std::move(term));
    }
}

std::vector<std::pair<LadderOp, Complex>> expand(const LinearField &f) {
    std::vector<std::pair<LadderOp, Complex>> out;
    for (const auto &[mode, coeff] : f.ann()) {
        out.push_back({LadderOp{mode, OpKind::kAnnihilate}, coeff});
    }
    for (const auto &[mode, coeff] : f.cre()) {
        out.push_back({LadderOp{mode, OpKind::kCreate}, coeff});
    }
    return out;
}

}  // namespace

std::vector<NormalOrderTerm> normal_order(const OpWord &word) {
    Polynomial poly;
    normal_order_into(poly, word, Complex{1, 0});
    std::vector<NormalOrderTerm> out;
    out.reserve(poly.size());
    for (auto &[w, c] : poly) {
        out.push_back({c, w});
    }
    return out;
}

Complex normal_order_expectation(std::span<const LinearField> product) {
    if (product.size() > kMaxOracleProductLength) {
        throw std::invalid_argument("normal_order_expectation: product longer than the oracle supports");
    }
    // Multiply left to right, normal ordering after each factor. A word of
    // length L needs at least L more factors to contract to a scalar, so
    // longer words are dropped early.
    Polynomial poly{{OpWord{}, Complex{1, 0}}};
    for (size_t k = 0; k < product.size(); k++) {
        size_t remaining = product.size() - k - 1;
        auto terms = expand(product[k]);
        Polynomial next;
        for (const auto &[word, coeff] : poly) {
            for (const auto &[op, c] : terms) {
                OpWord extended = word;
                extended.push_back(op);
                Polynomial ordered;
                normal_order_into(ordered, extended, coeff * c);
                for (const auto &[w, v] : ordered) {
                    if (w.size() <= remaining) {
                        add_term(next, w, v);
                    }
                }
            }
        }
        poly = std::move(next);
    }
    auto it = poly.find(OpWord{});
    return it == poly.end() ? Complex{0, 0} : it->second;
}

FockState::FockState(std::vector<std::string> modes, int cutoff, bool truncated)
    : modes_(std::move(modes)), cutoff_(cutoff), truncated_(truncated) {
    if (cutoff_ < 1) {
        throw std::invalid_argument("Fock cutoff must be >= 1");
    }
}

size_t FockState::mode_index(const std::string &label) const {
    auto it = std::find(modes_.begin(), modes_.end(), label);
    if (it == modes_.end()) {
        throw std::invalid_argument("unknown Fock mode " + label);
    }
    return static_cast<size_t>(it - modes_.begin());
}

void FockState::add_amplitude(const Occupation &occ, Complex amp) {
    if (occ.size() != modes_.size()) {
        throw std::invalid_argument("occupation vector has the wrong number of modes");
    }
    for (int n : occ) {
        if (n < 0 || n > cutoff_) {
            throw std::invalid_argument("occupation outside [0, cutoff]");
        }
    }
    amplitudes_[occ] += amp;
}

Complex FockState::amplitude(const Occupation &occ) const {
    auto it = amplitudes_.find(occ);
    return it == amplitudes_.end() ? Complex{0, 0} : it->second;
}

double FockState::norm() const {
    double total = 0;
    for (const auto &kv : amplitudes_) {
        total += std::norm(kv.second);
    }
    return total;
}

double FockState::max_boundary_amplitude() const {
    double worst = 0;
    for (const auto &[occ, amp] : amplitudes_) {
        if (std::any_of(occ.begin(), occ.end(), [&](int n) { return n == cutoff_; })) {
            worst = std::max(worst, std::abs(amp));
        }
    }
    return worst;
}

FockState FockState::apply_annihilators(std::span<const std::pair<size_t, Complex>> combo) const {
    FockState out(modes_, cutoff_, truncated_);
    for (const auto &[occ, amp] : amplitudes_) {
        for (const auto &[mode, coeff] : combo) {
            if (occ[mode] == 0 || coeff == Complex{0, 0}) {
                continue;
            }
            Occupation lowered = occ;
            lowered[mode] -= 1;
            out.amplitudes_[lowered] += coeff * std::sqrt(static_cast<double>(occ[mode])) * amp;
        }
    }
    return out;
}

FockState build_source_state(double chi1, int n_max, SourceForm form) {
    if (!(chi1 >= 0) || !std::isfinite(chi1)) {
        throw std::invalid_argument("chi1 must be finite and >= 0");
    }
    // Mode order: A_h, A_v, B_h, B_v.
    std::vector<std::string> modes{"A_h", "A_v", "B_h", "B_v"};
    double t = std::tanh(chi1);
    switch (form) {
        case SourceForm::kExactProduct: {
            FockState state(modes, n_max, true);
            double c2 = std::cosh(chi1) * std::cosh(chi1);
            for (int n = 0; n <= n_max; n++) {
                for (int m = 0; m <= n_max; m++) {
                    // n pairs in (A_h, B_v), m pairs in (A_v, B_h).
                    state.add_amplitude({n, m, m, n}, std::pow(t, n + m) / c2);
                }
            }
            return state;
        }
        case SourceForm::kTruncatedSum: {
            FockState state(modes, n_max, true);
            // 1 + 2 sum_{n>=1} t^{2n} = (1 + t^2) / (1 - t^2).
            double scale = std::sqrt((1 - t * t) / (1 + t * t));
            state.add_amplitude({0, 0, 0, 0}, scale);
            for (int n = 1; n <= n_max; n++) {
                double amp = scale * std::pow(t, n);
                state.add_amplitude({n, 0, 0, n}, amp);
                state.add_amplitude({0, n, n, 0}, amp);
            }
            return state;
        }
        case SourceForm::kLowGainPair: {
            FockState state(modes, std::max(n_max, 1), false);
            double amp = chi1 / std::sqrt(2.0);
            state.add_amplitude({0, 0, 0, 0}, 1.0);
            state.add_amplitude({1, 0, 0, 1}, amp);
            state.add_amplitude({0, 1, 1, 0}, amp);
            return state;
        }
    }
    throw std::invalid_argument("unknown source form");
}

namespace {

void check_truncation(const FockState &state) {
    if (state.truncated() && state.max_boundary_amplitude() > kBoundaryTolerance) {
        throw std::runtime_error("Fock cutoff too small: boundary amplitudes exceed tolerance");
    }
}

double detect_pair(const FockState &state, std::span<const std::pair<size_t, Complex>> first,
                   std::span<const std::pair<size_t, Complex>> second) {
    return state.apply_annihilators(first).apply_annihilators(second).norm();
}

}  // namespace

double fock_coincidence_rate(const FockState &state, double theta_a, double theta_b) {
    check_truncation(state);
    std::pair<size_t, Complex> ea[] = {
        {state.mode_index("A_h"), std::cos(theta_a)},
        {state.mode_index("A_v"), std::sin(theta_a)},
    };
    std::pair<size_t, Complex> eb[] = {
        {state.mode_index("B_h"), std::cos(theta_b)},
        {state.mode_index("B_v"), -std::sin(theta_b)},
    };
    return detect_pair(state, ea, eb);
}

double fock_singles_rate_a(const FockState &state, double theta_a) {
    return fock_coincidence_rate(state, theta_a, 0.0) + fock_coincidence_rate(state, theta_a, -std::numbers::pi / 2);
}

double fock_singles_rate_b(const FockState &state, double theta_b) {
    return fock_coincidence_rate(state, 0.0, theta_b) + fock_coincidence_rate(state, std::numbers::pi / 2, theta_b);
}

}  // namespace cvswap
