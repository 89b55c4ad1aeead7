// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "fockhom/entanglement.hpp"
#include "fockhom/hom.hpp"
#include "fockhom/source.hpp"

namespace {

using namespace fockhom;
constexpr double kPi = std::numbers::pi;
const Amplitude kI(0, 1);

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

// Wootters' definition through the eigenvalues of rho (Y x Y) rho* (Y x Y).
double wootters_reference(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix2cd y;
    y << 0, -kI, kI, 0;
    Eigen::Matrix4cd yy = kron(y, y);
    Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
    std::vector<double> l;
    for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
    std::sort(l.rbegin(), l.rend());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Eigen::Matrix4cd random_density(std::uint64_t seed, int rank) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(4, rank);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < rank; ++j) a(i, j) = {g(rng), g(rng)};
    Eigen::Matrix4cd rho = a * a.adjoint();
    return rho / rho.trace().real();
}

Eigen::Matrix4cd bell() {
    Eigen::Vector4cd v(1, 0, 0, 1);
    v /= std::sqrt(2.0);
    return v * v.adjoint();
}

TEST(PostselectedState, ConcurrenceIsTwoThirds) {
    for (int j = 0; j < 16; ++j) {
        const double phi = 2 * kPi * j / 16;
        auto s = postselected_state(phi);
        EXPECT_NEAR(concurrence(s), 2.0 / 3, 1e-12);
        EXPECT_NEAR(concurrence(s.density()), 2.0 / 3, 1e-12);
        EXPECT_NEAR(std::abs(s[TwoQubitPureState::kUL]), 0, 1e-15);
        EXPECT_NEAR(std::norm(s[TwoQubitPureState::kUU]), 1.0 / 3, 1e-15);
    }
}

TEST(PostselectedState, BranchWeights) {
    BranchWeights w;
    w.ul = 1;
    auto s = postselected_state(0.3, w);
    EXPECT_NEAR(s.vector().squaredNorm(), 1, 1e-12);
    // the UL branch cancels the determinant exactly
    EXPECT_NEAR(concurrence(s), 0.0, 1e-12);
    BranchWeights zero{0, 0, 0, 0};
    EXPECT_THROW(postselected_state(0, zero), std::invalid_argument);
    EXPECT_THROW(TwoQubitPureState({1, 1, 0, 0}), std::invalid_argument);
}

TEST(MixedPostselectedState, ConcurrenceScalesWithCoherence) {
    for (double s : {0.0, 0.1, 0.5, 0.83, 1.0}) {
        for (double phi : {0.0, 1.1, 2.9}) {
            auto rho = postselected_density(phi, s);
            EXPECT_NEAR(rho.trace().real(), 1, 1e-14);
            EXPECT_NEAR(concurrence(rho), 2 * s / 3, 1e-12);
            EXPECT_NEAR(concurrence_from_s(s), 2 * s / 3, 1e-15);
        }
    }
    EXPECT_THROW(concurrence_from_s(1.5), std::invalid_argument);
}

TEST(Concurrence, KnownStates) {
    EXPECT_NEAR(concurrence(bell()), 1.0, 1e-12);
    Eigen::Vector4cd prod(1, 0, 0, 0);
    EXPECT_NEAR(concurrence(Eigen::Matrix4cd(prod * prod.adjoint())), 0.0, 1e-12);
    EXPECT_NEAR(concurrence(Eigen::Matrix4cd(Eigen::Matrix4cd::Identity() / 4)), 0.0, 1e-12);
    for (double p : {0.2, 1.0 / 3, 0.5, 0.8, 1.0}) {
        Eigen::Matrix4cd werner = p * bell() + (1 - p) * Eigen::Matrix4cd::Identity() / 4;
        EXPECT_NEAR(concurrence(werner), std::max(0.0, (3 * p - 1) / 2), 1e-12) << p;
    }
}

TEST(Concurrence, MatchesReferenceOnRandomStates) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto rho = random_density(seed, 1 + static_cast<int>(seed % 4));
        EXPECT_NEAR(concurrence(rho), wootters_reference(rho), 1e-7) << seed;
    }
}

TEST(Concurrence, LocalUnitaryInvariance) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto rho = seed % 2 ? random_density(seed, 2) : postselected_density(0.1 * seed, 0.7);
        Eigen::Matrix4cd u = kron(random_qubit_unitary(seed * 2), random_qubit_unitary(seed * 2 + 1));
        Eigen::Matrix4cd rotated = u * rho * u.adjoint();
        EXPECT_NEAR(concurrence(rotated), concurrence(rho), 1e-10) << seed;
    }
}

TEST(Concurrence, RejectsNonStates) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() / 2;
    EXPECT_THROW(concurrence(m), std::invalid_argument);
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Identity() / 4;
    h(0, 1) = 0.1;
    EXPECT_THROW(concurrence(h), std::invalid_argument);
    Eigen::Matrix4cd neg = Eigen::Matrix4cd::Zero();
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(concurrence(neg), std::invalid_argument);
}

TEST(Concurrence, ConsistentWithOscillationAmplitude) {
    for (double theta : {0.2 * kPi, 0.5 * kPi, 0.8 * kPi}) {
        SourcePulseSpec src;
        src.theta = theta;
        const double s = k1_oscillation_amplitude(src);
        EXPECT_NEAR(s, std::pow(std::cos(theta / 2), 2), 1e-10);
        EXPECT_NEAR(concurrence(postselected_density(0.4, s)), concurrence_from_s(s), 1e-9);
    }
}

TEST(RandomQubitUnitary, IsUnitaryAndSeeded) {
    auto a = random_qubit_unitary(5);
    EXPECT_LT((a * a.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(a, random_qubit_unitary(5));
    EXPECT_NE(a, random_qubit_unitary(6));
}

TEST(TwoQubitPureState, Json) {
    auto j = postselected_state(0.2).to_json();
    EXPECT_TRUE(j.contains("UU"));
    EXPECT_TRUE(j.contains("LL"));
}

}  // namespace
