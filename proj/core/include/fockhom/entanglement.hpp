// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_ENTANGLEMENT_HPP
#define FOCKHOM_ENTANGLEMENT_HPP

#include <array>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fockhom/fock_state.hpp"

namespace fockhom {

/// Path-time two-qubit state. Basis order UU, UL, LU, LL; the first slot is
/// the early photon's path, the second the late photon's.
class TwoQubitPureState {
   public:
    static constexpr std::size_t kUU = 0, kUL = 1, kLU = 2, kLL = 3;

    /// Throws std::invalid_argument unless the norm is 1 within 1e-12.
    explicit TwoQubitPureState(const std::array<Amplitude, 4>& amplitudes);

    const std::array<Amplitude, 4>& amplitudes() const { return amps_; }
    Amplitude operator[](std::size_t i) const { return amps_[i]; }
    Eigen::Vector4cd vector() const;
    Eigen::Matrix4cd density() const;

    nlohmann::json to_json() const;

   private:
    std::array<Amplitude, 4> amps_;
};

/// Relative branch amplitudes before normalization. The defaults give the
/// ideal state; the UL branch needs two photons in one pulse.
struct BranchWeights {
    Amplitude lu = 1;
    Amplitude uu = 1;
    Amplitude ll = 1;
    Amplitude ul = 0;
};

/// Normalized (w_lu i e^{i phi}|LU> + w_uu|UU> - w_ll e^{2 i phi}|LL> + w_ul i e^{i phi}|UL>).
/// Throws std::invalid_argument when every weight is zero.
TwoQubitPureState postselected_state(double phi, const BranchWeights& weights = {});

/// Post-selected state with every coherence scaled by s and the populations
/// of the ideal state kept: s |psi><psi| + (1 - s) diag(|psi|^2).
Eigen::Matrix4cd postselected_density(double phi, double s);

/// 2 |a_UU a_LL - a_UL a_LU|.
double concurrence(const TwoQubitPureState& state);

/// Wootters concurrence. Throws std::invalid_argument unless rho is Hermitian,
/// positive and of unit trace within 1e-9.
double concurrence(const Eigen::Matrix4cd& rho);

/// (2/3) s; s in [0, 1].
double concurrence_from_s(double s2);

/// Random single-qubit unitary from a seed (Haar).
Eigen::Matrix2cd random_qubit_unitary(std::uint64_t seed);

}  // namespace fockhom

#endif
