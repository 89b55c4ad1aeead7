// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/fock_ops.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "fockhom/decomposition.hpp"

namespace fockhom {

namespace {

using SparseAmps = std::unordered_map<Occupation, Amplitude, OccupationHash>;

// Amplitudes below this (squared) are treated as exact cancellations.
constexpr double kZeroTolerance = 1e-30;

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

MultimodeFockState collect(const SparseAmps& amps, std::size_t modes, int cutoff,
                           bool unnormalized) {
    MultimodeFockState out(modes, cutoff);
    out.tag_unnormalized(unnormalized);
    for (const auto& [occ, amp] : amps) {
        if (std::norm(amp) <= kZeroTolerance) {
            continue;
        }
        for (auto v : occ) {
            if (v > cutoff) {
                throw std::out_of_range("apply_mode_unitary: output exceeds photon cutoff " +
                                        std::to_string(cutoff));
            }
        }
        out.add(occ, amp);
    }
    return out;
}

MultimodeFockState apply_direct(const MultimodeFockState& state, const Eigen::MatrixXcd& u) {
    const std::size_t n = state.mode_count();
    SparseAmps out;
    SparseAmps cur;
    SparseAmps next;
    for (const auto& [occ, amp] : state.terms()) {
        double norm = 1;
        for (auto v : occ) {
            norm *= factorial(v);
        }
        cur.clear();
        cur.emplace(Occupation(n, 0), amp / std::sqrt(norm));
        for (std::size_t i = 0; i < n; ++i) {
            for (int rep = 0; rep < occ[i]; ++rep) {
                next.clear();
                for (const auto& [o, v] : cur) {
                    for (std::size_t j = 0; j < n; ++j) {
                        Amplitude uji = u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
                        if (uji == Amplitude{}) {
                            continue;
                        }
                        Occupation o2 = o;
                        o2[j] += 1;
                        next[o2] += v * uji * std::sqrt(static_cast<double>(o2[j]));
                    }
                }
                std::swap(cur, next);
            }
        }
        for (const auto& [o, v] : cur) {
            out[o] += v;
        }
    }
    return collect(out, n, state.cutoff(), state.tagged_unnormalized());
}

// Output amplitudes over k photons in mode a (rest in b) for an input with
// (na, nb) photons in the pair.
std::vector<Amplitude> two_mode_row(int na, int nb, const Eigen::Matrix2cd& m) {
    const int total = na + nb;
    // Polynomial in x = a_a^dag, y = a_b^dag, indexed by the power of x.
    std::vector<Amplitude> poly(static_cast<std::size_t>(total) + 1, Amplitude{});
    poly[0] = 1;
    int degree = 0;
    auto multiply = [&](Amplitude cx, Amplitude cy) {
        for (int p = degree + 1; p >= 0; --p) {
            Amplitude v = Amplitude{};
            if (p >= 1) {
                v += poly[static_cast<std::size_t>(p - 1)] * cx;
            }
            if (p <= degree) {
                v += poly[static_cast<std::size_t>(p)] * cy;
            }
            poly[static_cast<std::size_t>(p)] = v;
        }
        ++degree;
    };
    for (int r = 0; r < na; ++r) {
        multiply(m(0, 0), m(1, 0));
    }
    for (int r = 0; r < nb; ++r) {
        multiply(m(0, 1), m(1, 1));
    }
    const double inv = 1.0 / std::sqrt(factorial(na) * factorial(nb));
    for (int k = 0; k <= total; ++k) {
        poly[static_cast<std::size_t>(k)] *= std::sqrt(factorial(k) * factorial(total - k)) * inv;
    }
    return poly;
}

SparseAmps apply_two_mode_sparse(const SparseAmps& in, std::size_t a, std::size_t b,
                                 const Eigen::Matrix2cd& m) {
    std::map<std::pair<int, int>, std::vector<Amplitude>> cache;
    SparseAmps out;
    out.reserve(in.size() * 2);
    for (const auto& [occ, amp] : in) {
        const int na = occ[a];
        const int nb = occ[b];
        if (na == 0 && nb == 0) {
            out[occ] += amp;
            continue;
        }
        auto key = std::make_pair(na, nb);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, two_mode_row(na, nb, m)).first;
        }
        Occupation o2 = occ;
        const int total = na + nb;
        for (int k = 0; k <= total; ++k) {
            Amplitude c = it->second[static_cast<std::size_t>(k)];
            if (c == Amplitude{}) {
                continue;
            }
            o2[a] = static_cast<std::uint8_t>(k);
            o2[b] = static_cast<std::uint8_t>(total - k);
            out[o2] += amp * c;
        }
    }
    return out;
}

SparseAmps apply_phase_sparse(SparseAmps in, std::size_t mode, double phase) {
    const Amplitude step = std::polar(1.0, phase);
    for (auto& [occ, amp] : in) {
        for (int r = 0; r < occ[mode]; ++r) {
            amp *= step;
        }
    }
    return in;
}

SparseAmps apply_permutation_sparse(const SparseAmps& in, const std::vector<std::size_t>& perm) {
    SparseAmps out;
    out.reserve(in.size());
    Occupation o2;
    for (const auto& [occ, amp] : in) {
        o2.assign(occ.size(), 0);
        for (std::size_t i = 0; i < occ.size(); ++i) {
            o2[perm[i]] = occ[i];
        }
        out.emplace(o2, amp);
    }
    return out;
}

bool pair_occupied(const SparseAmps& in, std::size_t a, std::size_t b) {
    for (const auto& [occ, amp] : in) {
        if (occ[a] != 0 || occ[b] != 0) {
            return true;
        }
    }
    return false;
}

SparseAmps to_sparse(const MultimodeFockState& state) {
    SparseAmps s;
    s.reserve(state.size());
    for (const auto& [occ, amp] : state.terms()) {
        s.emplace(occ, amp);
    }
    return s;
}

MultimodeFockState apply_decomposed(const MultimodeFockState& state, const ModeUnitary& u) {
    UnitaryDecomposition d = decompose(u);
    SparseAmps cur;
    cur.reserve(state.size());
    for (const auto& [occ, amp] : state.terms()) {
        Amplitude factor = 1;
        for (std::size_t m = 0; m < occ.size(); ++m) {
            for (int r = 0; r < occ[m]; ++r) {
                factor *= d.phases[m];
            }
        }
        cur.emplace(occ, amp * factor);
    }
    for (auto it = d.rotations.rbegin(); it != d.rotations.rend(); ++it) {
        cur = apply_two_mode_sparse(cur, it->mode_a, it->mode_b, it->matrix);
    }
    return collect(cur, state.mode_count(), state.cutoff(), state.tagged_unnormalized());
}

void check_dimension(const MultimodeFockState& state, const ModeUnitary& u) {
    if (u.dimension() != state.mode_count()) {
        throw std::invalid_argument("apply_mode_unitary: unitary dimension " +
                                    std::to_string(u.dimension()) + " != mode count " +
                                    std::to_string(state.mode_count()));
    }
}

}  // namespace

MultimodeFockState apply_mode_unitary(const MultimodeFockState& state, const ModeUnitary& u,
                                      UnitaryStrategy strategy) {
    check_dimension(state, u);
    switch (strategy) {
        case UnitaryStrategy::kTransitionAmplitudes:
            return apply_direct(state, u.matrix());
        case UnitaryStrategy::kTwoModeDecomposition:
            return apply_decomposed(state, u);
    }
    throw std::logic_error("apply_mode_unitary: unknown strategy");
}

MixedState apply_mode_unitary(const MixedState& state, const ModeUnitary& u,
                              UnitaryStrategy strategy) {
    std::vector<WeightedState> out;
    out.reserve(state.components().size());
    for (const auto& c : state.components()) {
        out.push_back({c.weight, apply_mode_unitary(c.state, u, strategy)});
    }
    return MixedState(std::move(out));
}

MultimodeFockState apply_two_mode(const MultimodeFockState& state, std::size_t a, std::size_t b,
                                  const Eigen::Matrix2cd& m) {
    if (a >= state.mode_count() || b >= state.mode_count() || a == b) {
        throw std::out_of_range("apply_two_mode: invalid mode pair");
    }
    Eigen::MatrixXcd dyn = m;
    if (unitarity_defect(dyn) > ModeUnitary::kTolerance) {
        throw std::invalid_argument("apply_two_mode: matrix is not unitary");
    }
    return collect(apply_two_mode_sparse(to_sparse(state), a, b, m), state.mode_count(),
                   state.cutoff(), state.tagged_unnormalized());
}

MultimodeFockState apply_phase(const MultimodeFockState& state, std::size_t mode, double phase) {
    if (mode >= state.mode_count()) {
        throw std::out_of_range("apply_phase: mode index");
    }
    MultimodeFockState out(state.mode_count(), state.cutoff());
    out.tag_unnormalized(state.tagged_unnormalized());
    for (const auto& [occ, amp] : state.terms()) {
        out.add(occ, amp * std::polar(1.0, phase * occ[mode]));
    }
    return out;
}

MultimodeFockState apply_permutation(const MultimodeFockState& state,
                                     const std::vector<std::size_t>& perm) {
    const std::size_t n = state.mode_count();
    if (perm.size() != n) {
        throw std::invalid_argument("apply_permutation: permutation length mismatch");
    }
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) {
            throw std::invalid_argument("apply_permutation: not a permutation");
        }
        seen[p] = true;
    }
    MultimodeFockState out(n, state.cutoff());
    out.tag_unnormalized(state.tagged_unnormalized());
    Occupation o2(n);
    for (const auto& [occ, amp] : state.terms()) {
        for (std::size_t i = 0; i < n; ++i) {
            o2[perm[i]] = occ[i];
        }
        out.add(o2, amp);
    }
    return out;
}

MultimodeFockState apply_mode_ops(const MultimodeFockState& state, std::span<const ModeOp> ops) {
    const std::size_t n = state.mode_count();
    SparseAmps cur = to_sparse(state);
    for (const auto& op : ops) {
        switch (op.kind) {
            case ModeOp::Kind::kTwoMode:
                if (op.a >= n || op.b >= n || op.a == op.b) {
                    throw std::out_of_range("apply_mode_ops: invalid mode pair");
                }
                if (pair_occupied(cur, op.a, op.b)) {
                    cur = apply_two_mode_sparse(cur, op.a, op.b, op.matrix);
                }
                break;
            case ModeOp::Kind::kPhase:
                if (op.a >= n) {
                    throw std::out_of_range("apply_mode_ops: invalid mode");
                }
                cur = apply_phase_sparse(std::move(cur), op.a, op.phase);
                break;
            case ModeOp::Kind::kPermutation:
                if (op.perm.size() != n) {
                    throw std::invalid_argument("apply_mode_ops: permutation length mismatch");
                }
                cur = apply_permutation_sparse(cur, op.perm);
                break;
        }
    }
    return collect(cur, n, state.cutoff(), state.tagged_unnormalized());
}

MixedState apply_uniform_loss(const MultimodeFockState& state, std::size_t mode, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("apply_uniform_loss: eta must be in [0, 1]");
    }
    if (mode >= state.mode_count()) {
        throw std::out_of_range("apply_uniform_loss: mode index");
    }
    // Branch k = number of photons lost to the environment.
    std::map<int, MultimodeFockState> branches;
    for (const auto& [occ, amp] : state.terms()) {
        const int n = occ[mode];
        for (int k = 0; k <= n; ++k) {
            double w = binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k);
            if (w == 0) {
                continue;
            }
            auto it = branches.find(k);
            if (it == branches.end()) {
                it = branches.emplace(k, MultimodeFockState(state.mode_count(), state.cutoff())).first;
            }
            Occupation o2 = occ;
            o2[mode] = static_cast<std::uint8_t>(n - k);
            it->second.add(o2, amp * std::sqrt(w));
        }
    }
    double total = 0;
    for (const auto& [k, s] : branches) {
        total += s.norm_squared();
    }
    if (total <= 0) {
        throw std::domain_error("apply_uniform_loss: zero input state");
    }
    std::vector<WeightedState> out;
    for (const auto& [k, s] : branches) {
        double w = s.norm_squared();
        if (w <= 0) {
            continue;
        }
        out.push_back({w / total, s.normalized()});
    }
    return MixedState(std::move(out));
}

MixedState apply_uniform_loss(const MixedState& state, std::size_t mode, double eta) {
    std::vector<WeightedState> out;
    for (const auto& c : state.components()) {
        const MixedState lossy = apply_uniform_loss(c.state, mode, eta);
        for (const auto& b : lossy.components()) {
            out.push_back({c.weight * b.weight, b.state});
        }
    }
    return MixedState(std::move(out));
}

namespace {

void check_pattern(std::size_t modes, const ModePattern& pattern) {
    if (pattern.size() != modes) {
        throw std::invalid_argument("postselect: pattern length " + std::to_string(pattern.size()) +
                                    " != mode count " + std::to_string(modes));
    }
}

std::vector<std::size_t> free_modes(const ModePattern& pattern) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (!pattern[i].has_value()) {
            kept.push_back(i);
        }
    }
    return kept;
}

// Unnormalized projection onto the pattern, reduced to the free modes.
MultimodeFockState project(const MultimodeFockState& state, const ModePattern& pattern,
                           const std::vector<std::size_t>& kept) {
    MultimodeFockState out(kept.size(), state.cutoff());
    out.tag_unnormalized();
    Occupation reduced(kept.size());
    for (const auto& [occ, amp] : state.terms()) {
        bool match = true;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (pattern[i].has_value() && *pattern[i] != occ[i]) {
                match = false;
                break;
            }
        }
        if (!match) {
            continue;
        }
        for (std::size_t i = 0; i < kept.size(); ++i) {
            reduced[i] = occ[kept[i]];
        }
        out.add(reduced, amp);
    }
    return out;
}

}  // namespace

PostselectResult postselect(const MultimodeFockState& state, const ModePattern& pattern) {
    return postselect(MixedState(state), pattern);
}

PostselectResult postselect(const MixedState& state, const ModePattern& pattern) {
    check_pattern(state.mode_count(), pattern);
    PostselectResult result;
    result.kept_modes = free_modes(pattern);
    std::vector<WeightedState> parts;
    double total = 0;
    for (const auto& c : state.components()) {
        MultimodeFockState p = project(c.state, pattern, result.kept_modes);
        double w = c.weight * p.norm_squared();
        if (w <= 0) {
            continue;
        }
        total += w;
        parts.push_back({w, p.normalized()});
    }
    result.probability = total;
    if (total <= 0) {
        return result;
    }
    for (auto& p : parts) {
        p.weight /= total;
    }
    result.conditional = MixedState(std::move(parts));
    return result;
}

double normally_ordered_g2(const MultimodeFockState& state, std::size_t i, std::size_t j) {
    if (i >= state.mode_count() || j >= state.mode_count()) {
        throw std::out_of_range("normally_ordered_g2: mode index");
    }
    double total = 0;
    for (const auto& [occ, amp] : state.terms()) {
        double ni = occ[i];
        double nj = occ[j];
        total += std::norm(amp) * (i == j ? ni * (ni - 1) : ni * nj);
    }
    return total;
}

double normally_ordered_g2(const MixedState& state, std::size_t i, std::size_t j) {
    double total = 0;
    for (const auto& c : state.components()) {
        total += c.weight * normally_ordered_g2(c.state, i, j);
    }
    return total;
}

double normally_ordered_g2(const MixedState& state, std::span<const std::size_t> group_a,
                           std::span<const std::size_t> group_b) {
    const std::size_t n = state.mode_count();
    std::vector<std::uint8_t> in_a(n, 0);
    std::vector<std::uint8_t> in_b(n, 0);
    for (auto m : group_a) {
        if (m >= n) {
            throw std::out_of_range("normally_ordered_g2: mode index");
        }
        in_a[m] = 1;
    }
    for (auto m : group_b) {
        if (m >= n) {
            throw std::out_of_range("normally_ordered_g2: mode index");
        }
        in_b[m] = 1;
    }
    double total = 0;
    for (const auto& c : state.components()) {
        double sub = 0;
        for (const auto& [occ, amp] : c.state.terms()) {
            double na = 0;
            double nb = 0;
            double nab = 0;
            for (std::size_t m = 0; m < n; ++m) {
                if (occ[m] == 0) {
                    continue;
                }
                na += in_a[m] * occ[m];
                nb += in_b[m] * occ[m];
                nab += in_a[m] * in_b[m] * occ[m];
            }
            // sum_{i in A, j in B} (n_i n_j - delta_ij n_i)
            sub += std::norm(amp) * (na * nb - nab);
        }
        total += c.weight * sub;
    }
    return total;
}

double mean_photon_number(const MixedState& state, std::span<const std::size_t> group) {
    double total = 0;
    for (const auto& c : state.components()) {
        for (auto m : group) {
            total += c.weight * c.state.mean_photon_number(m);
        }
    }
    return total;
}

std::vector<double> photon_number_distribution(const MixedState& state,
                                               std::span<const std::size_t> group) {
    std::vector<double> dist;
    for (const auto& c : state.components()) {
        for (const auto& [occ, amp] : c.state.terms()) {
            std::size_t count = 0;
            for (auto m : group) {
                count += occ.at(m);
            }
            if (dist.size() <= count) {
                dist.resize(count + 1, 0.0);
            }
            dist[count] += c.weight * std::norm(amp);
        }
    }
    return dist;
}

}  // namespace fockhom
