// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_FOCK_OPS_HPP
#define FOCKHOM_FOCK_OPS_HPP

#include <optional>
#include <span>
#include <vector>

#include "fockhom/fock_state.hpp"

namespace fockhom {

enum class UnitaryStrategy {
    /// Expand every creation operator through the full matrix.
    kTransitionAmplitudes,
    /// Factor the matrix into two-mode rotations and phases, apply in sequence.
    kTwoModeDecomposition,
};

MultimodeFockState apply_mode_unitary(const MultimodeFockState& state, const ModeUnitary& u,
                                      UnitaryStrategy strategy = UnitaryStrategy::kTransitionAmplitudes);
MixedState apply_mode_unitary(const MixedState& state, const ModeUnitary& u,
                              UnitaryStrategy strategy = UnitaryStrategy::kTransitionAmplitudes);

/// Applies a 2x2 unitary to modes (a, b), leaving the rest untouched. The
/// matrix uses the same column convention as ModeUnitary.
MultimodeFockState apply_two_mode(const MultimodeFockState& state, std::size_t a, std::size_t b,
                                  const Eigen::Matrix2cd& m);
/// Multiplies every term by exp(i * phase * n_mode).
MultimodeFockState apply_phase(const MultimodeFockState& state, std::size_t mode, double phase);
/// Permutes modes: output mode perm[i] receives input mode i.
MultimodeFockState apply_permutation(const MultimodeFockState& state,
                                     const std::vector<std::size_t>& perm);

/// One elementary step of a lowered linear-optical network.
struct ModeOp {
    enum class Kind { kTwoMode, kPhase, kPermutation };
    Kind kind;
    std::size_t a = 0;
    std::size_t b = 0;
    Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Identity();
    double phase = 0;
    /// Output mode perm[i] receives input mode i.
    std::vector<std::size_t> perm;
};

/// Applies ops in order without leaving the sparse working representation.
/// Intermediate states may exceed the cutoff; only the result is checked.
MultimodeFockState apply_mode_ops(const MultimodeFockState& state, std::span<const ModeOp> ops);

/// Bosonic loss on one mode: transmission `eta`, the reflected part traced out.
MixedState apply_uniform_loss(const MultimodeFockState& state, std::size_t mode, double eta);
MixedState apply_uniform_loss(const MixedState& state, std::size_t mode, double eta);

/// Per-mode constraint: exact photon count, or nullopt for "anything".
using ModePattern = std::vector<std::optional<int>>;

struct PostselectResult {
    double probability = 0;
    /// Conditional state over the unconstrained modes (in their original
    /// order). Empty when nothing matched.
    MixedState conditional;
    std::vector<std::size_t> kept_modes;

    bool empty() const { return conditional.empty(); }
};

PostselectResult postselect(const MultimodeFockState& state, const ModePattern& pattern);
PostselectResult postselect(const MixedState& state, const ModePattern& pattern);

/// <a_i^dag a_j^dag a_j a_i>.
double normally_ordered_g2(const MultimodeFockState& state, std::size_t i, std::size_t j);
double normally_ordered_g2(const MixedState& state, std::size_t i, std::size_t j);

/// Same correlation for detectors that sum several modes (e.g. all internal
/// modes of one spatial/time bin): <:N_A N_B:> with N_X = sum of n over X.
double normally_ordered_g2(const MixedState& state, std::span<const std::size_t> group_a,
                           std::span<const std::size_t> group_b);
double mean_photon_number(const MixedState& state, std::span<const std::size_t> group);

/// Photon-number distribution of a subset of modes, indexed by total count.
std::vector<double> photon_number_distribution(const MixedState& state,
                                               std::span<const std::size_t> group);

}  // namespace fockhom

#endif
