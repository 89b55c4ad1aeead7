// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace fockhom {

namespace {

constexpr double kStateTolerance = 1e-9;

void check_density(const Eigen::Matrix4cd& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
        throw std::invalid_argument("concurrence: density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Amplitude(1)) > kStateTolerance) {
        throw std::invalid_argument("concurrence: density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    if (es.eigenvalues().minCoeff() < -kStateTolerance) {
        throw std::invalid_argument("concurrence: density matrix is not positive");
    }
}

}  // namespace

TwoQubitPureState::TwoQubitPureState(const std::array<Amplitude, 4>& amplitudes) : amps_(amplitudes) {
    double n = 0;
    for (const auto& a : amps_) {
        n += std::norm(a);
    }
    if (std::abs(n - 1) > 1e-12) {
        throw std::invalid_argument("TwoQubitPureState: norm " + std::to_string(n) + " is not 1");
    }
}

Eigen::Vector4cd TwoQubitPureState::vector() const { return {amps_[0], amps_[1], amps_[2], amps_[3]}; }

Eigen::Matrix4cd TwoQubitPureState::density() const {
    const Eigen::Vector4cd v = vector();
    return v * v.adjoint();
}

nlohmann::json TwoQubitPureState::to_json() const {
    static const char* names[] = {"UU", "UL", "LU", "LL"};
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < 4; ++i) {
        j[names[i]] = {amps_[i].real(), amps_[i].imag()};
    }
    return j;
}

TwoQubitPureState postselected_state(double phi, const BranchWeights& w) {
    const Amplitude i(0, 1);
    std::array<Amplitude, 4> a{};
    a[TwoQubitPureState::kUU] = w.uu;
    a[TwoQubitPureState::kUL] = w.ul * i * std::polar(1.0, phi);
    a[TwoQubitPureState::kLU] = w.lu * i * std::polar(1.0, phi);
    a[TwoQubitPureState::kLL] = -w.ll * std::polar(1.0, 2 * phi);
    double n = 0;
    for (const auto& x : a) {
        n += std::norm(x);
    }
    if (n == 0) {
        throw std::invalid_argument("postselected_state: all branch weights are zero");
    }
    for (auto& x : a) {
        x /= std::sqrt(n);
    }
    return TwoQubitPureState(a);
}

Eigen::Matrix4cd postselected_density(double phi, double s) {
    if (!(s >= 0 && s <= 1)) {
        throw std::invalid_argument("postselected_density: s must be in [0, 1]");
    }
    const Eigen::Matrix4cd pure = postselected_state(phi).density();
    Eigen::Matrix4cd rho = s * pure;
    rho.diagonal() = pure.diagonal();
    return rho;
}

double concurrence(const TwoQubitPureState& st) {
    using S = TwoQubitPureState;
    return std::min(1.0, 2 * std::abs(st[S::kUU] * st[S::kLL] - st[S::kUL] * st[S::kLU]));
}

double concurrence(const Eigen::Matrix4cd& rho) {
    check_density(rho);
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1;
    yy(1, 2) = 1;
    yy(2, 1) = 1;
    yy(3, 0) = -1;

    // With rho = V V^dag, the Wootters lambdas are the singular values of
    // V^T (Y x Y) V. Eigenvalues at round-off level are dropped so that
    // rank-deficient states do not pick up sqrt(eps) noise.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    Eigen::Matrix4cd v = es.eigenvectors();
    for (int k = 0; k < 4; ++k) {
        const double p = es.eigenvalues()[k];
        v.col(k) *= p > 1e-14 ? std::sqrt(p) : 0.0;
    }
    const Eigen::Matrix4cd tau = v.transpose() * yy * v;
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
    Eigen::Vector4d lam = svd.singularValues();
    std::sort(lam.data(), lam.data() + 4, std::greater<>());
    return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

double concurrence_from_s(double s2) {
    if (!(s2 >= 0 && s2 <= 1)) {
        throw std::invalid_argument("concurrence_from_s: s must be in [0, 1]");
    }
    return 2.0 * s2 / 3.0;
}

Eigen::Matrix2cd random_qubit_unitary(std::uint64_t seed) {
    const ModeUnitary u = random_unitary(2, seed);
    return u.matrix();
}

}  // namespace fockhom
