// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fock_oracle.hpp"
#include "fockhom/errors.hpp"
#include "fockhom/network.hpp"
#include "fockhom/ns_gate_constants.hpp"
#include "fockhom/ns_gate_solver.hpp"
#include "fockhom/provenance.hpp"

namespace {

using namespace fockhom;
constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;
const Amplitude kI(0, 1);

InterferometerNetwork line(int modes) {
    std::vector<ModeLabel> labels;
    for (int i = 0; i < modes; ++i) labels.push_back({i, 0, 0});
    return InterferometerNetwork(labels);
}

InterferometerNetwork random_network(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<ModeLabel> labels;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 3; ++t) labels.push_back({s, t, 0});
    InterferometerNetwork net(labels);
    for (int k = 0; k < 8; ++k) {
        const auto a = static_cast<std::size_t>(rng() % 6);
        auto b = static_cast<std::size_t>(rng() % 6);
        if (b == a) b = (a + 1) % 6;
        switch (rng() % 4) {
            case 0: net.add(BeamSplitter{a, b, u(rng), 2 * kPi * u(rng)}); break;
            case 1: net.add(PhaseShift{a, 2 * kPi * u(rng)}); break;
            case 2: net.add(Delay{static_cast<int>(rng() % 2), 1}); break;
            default: net.add(Swap{a, b}); break;
        }
    }
    return net;
}

TEST(BeamSplitter, MatrixConvention) {
    auto m = beamsplitter_matrix(0.5, 0);
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(m(0, 0) - r), 0, kTol);
    EXPECT_NEAR(std::abs(m(0, 1) - kI * r), 0, kTol);
    EXPECT_NEAR(std::abs(m(1, 0) - kI * r), 0, kTol);
    auto rot = beamsplitter_matrix(0.3, kPi / 2);
    EXPECT_NEAR(rot.imag().cwiseAbs().maxCoeff(), 0, kTol);
    EXPECT_NEAR(rot(1, 0).real(), std::sqrt(0.3), kTol);
    for (double r2 : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        EXPECT_LT(unitarity_defect(beamsplitter_matrix(r2, 0.4)), kTol);
    }
}

TEST(Network, RejectsUnknownModes) {
    auto net = line(2);
    EXPECT_ANY_THROW(net.add(BeamSplitter{0, 2}));
    EXPECT_ANY_THROW(net.add(PhaseShift{5, 0.1}));
    EXPECT_ANY_THROW(net.mode({7, 0, 0}));
    EXPECT_FALSE(net.find_mode({7, 0, 0}).has_value());
}

TEST(Network, RotationIsRealOrthogonal) {
    for (double g : {0.0, 0.3, -0.7, 2.0, 3.5, -2.9}) {
        auto net = line(2);
        append_rotation(net, 0, 1, g);
        auto u = compile(net).matrix();
        EXPECT_NEAR(std::abs(u(0, 0) - std::cos(g)), 0, kTol);
        EXPECT_NEAR(std::abs(u(0, 1) + std::sin(g)), 0, kTol);
        EXPECT_NEAR(std::abs(u(1, 0) - std::sin(g)), 0, kTol);
        EXPECT_NEAR(std::abs(u(1, 1) - std::cos(g)), 0, kTol);
    }
}

TEST(Network, DelayIsWrappingPermutation) {
    std::vector<ModeLabel> labels;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 4; ++t) labels.push_back({s, t, 0});
    InterferometerNetwork net(labels);
    auto perm = net.delay_permutation(Delay{1, 1});
    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
    EXPECT_EQ(perm[net.mode({1, 0, 0})], net.mode({1, 1, 0}));
    EXPECT_EQ(perm[net.mode({1, 3, 0})], net.mode({1, 0, 0}));
    EXPECT_EQ(perm[net.mode({0, 2, 0})], net.mode({0, 2, 0}));
}

TEST(Network, CompileAgreesWithPropagate) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto net = random_network(seed);
        auto u = compile(net);
        EXPECT_LT(unitarity_defect(u.matrix()), 1e-12);
        MultimodeFockState in(6, 2);
        in.add({1, 0, 0, 1, 0, 0}, 0.6);
        in.add({0, 0, 2, 0, 0, 0}, Amplitude(0, 0.8));
        auto a = propagate(in, net);
        auto b = apply_mode_unitary(in, u);
        for (const auto& [o, amp] : b.terms()) {
            EXPECT_NEAR(std::abs(a.amplitude(o) - amp), 0, 1e-12);
        }
        auto ops = lower(net);
        auto c = apply_mode_ops(in, ops);
        EXPECT_NEAR(std::abs(c.inner(b) - 1.0), 0, 1e-12);
    }
}

TEST(Network, JsonRoundTrip) {
    auto net = random_network(42);
    auto back = InterferometerNetwork::from_json(net.to_json());
    EXPECT_EQ(back.to_json(), net.to_json());
    EXPECT_LT((compile(back).matrix() - compile(net).matrix()).cwiseAbs().maxCoeff(), kTol);
    EXPECT_THROW(InterferometerNetwork::from_json({{"modes", nlohmann::json::array()},
                                                   {"elements", {{{"type", "mirror"}}}}}),
                 std::invalid_argument);
}

TEST(Mzi, SinglePhotonPathAmplitudes) {
    for (double phi : {0.0, 0.4, 2.5}) {
        MziOptions o;
        o.phi = phi;
        auto mzi = build_unbalanced_mzi(o);
        auto u = compile(mzi.network);
        const Amplitude e = std::exp(kI * phi);
        for (int t = 0; t < o.window; ++t) {
            const auto in = mzi.input_mode(t, 0);
            EXPECT_NEAR(std::abs(u(mzi.detector_modes(1, t)[0], in) - 0.5 * kI), 0, kTol);
            EXPECT_NEAR(std::abs(u(mzi.detector_modes(1, t + 1)[0], in) - 0.5 * kI * e), 0, kTol);
            EXPECT_NEAR(std::abs(u(mzi.detector_modes(2, t)[0], in) - 0.5), 0, kTol);
            EXPECT_NEAR(std::abs(u(mzi.detector_modes(2, t + 1)[0], in) + 0.5 * e), 0, kTol);
        }
    }
}

TEST(Mzi, PerpendicularDoublesDetectorModes) {
    MziOptions o;
    o.perpendicular = true;
    auto mzi = build_unbalanced_mzi(o);
    EXPECT_EQ(mzi.detector_modes(1, 2).size(), 2u);
    EXPECT_THROW(mzi.detector_modes(3, 0), std::out_of_range);
    o.window = 3;
    EXPECT_THROW(build_unbalanced_mzi(o), std::invalid_argument);
}

TEST(NsGate, HeraldedAmplitudes) {
    const double p = (3 - std::sqrt(2.0)) / 7;
    EXPECT_NEAR(ns_success_probability(), p, kTol);
    auto g = build_ns_gate();
    EXPECT_NEAR(g.success_probability, p, 1e-12);
    auto a = ns_gate_amplitudes(g.angles);
    EXPECT_NEAR(std::abs(a[0] - a[1]), 0, 1e-12);
    EXPECT_NEAR(std::abs(a[2] + a[0]), 0, 1e-12);
    EXPECT_NEAR(std::norm(a[0]), p, 1e-12);
}

TEST(NsGate, BadAnglesViolateContract) {
    EXPECT_THROW(build_ns_gate({0.1, 0.2, 0.3}), NumericalContractError);
}

TEST(NsGate, SolverReproducesFrozenConstants) {
    auto r = solve_ns_gate();
    EXPECT_LT(r.max_residual, 1e-12);
    EXPECT_NEAR(r.angles.a, ns_constants::kAngleA, 1e-12);
    EXPECT_NEAR(r.angles.b, ns_constants::kAngleB, 1e-12);
    EXPECT_NEAR(r.angles.c, ns_constants::kAngleC, 1e-12);
}

TEST(NsGate, SolverFailureIsReported) {
    EXPECT_THROW(solve_ns_gate({0.6, 4.3, 0.3}, -1.0), NumericalContractError);
}

// Heralded transfer matrix between logical inputs and outputs, computed from
// permanents of the compiled network.
TEST(HeraldedCnot, LogicalTransferIsScaledCnot) {
    auto g = build_heralded_cnot();
    auto u = compile(g.network).matrix();
    using M = CnotModes;
    auto logical = [](int c, int t) {
        oracle::Occ o(8, 0);
        o[c ? M::c1 : M::c0] = 1;
        o[t ? M::t1 : M::t0] = 1;
        o[M::h1] = 1;
        o[M::h3] = 1;
        return o;
    };
    Eigen::Matrix4cd transfer;
    double leak_free_total = 0;
    for (int in = 0; in < 4; ++in) {
        for (int out = 0; out < 4; ++out) {
            transfer(out, in) = oracle::transition_amplitude(u, logical(in >> 1, in & 1), logical(out >> 1, out & 1));
        }
        double heralded = 0;
        for (const auto& o : oracle::occupations(8, 4)) {
            if (o[M::h0] == 0 && o[M::h1] == 1 && o[M::h2] == 0 && o[M::h3] == 1) {
                heralded += std::norm(oracle::transition_amplitude(u, logical(in >> 1, in & 1), o));
            }
        }
        leak_free_total += heralded;
    }
    const double p = std::pow((3 - std::sqrt(2.0)) / 7, 2);
    Eigen::Matrix4cd cnot = Eigen::Matrix4cd::Zero();
    cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1;
    const Amplitude phase = transfer(0, 0) / std::abs(transfer(0, 0));
    EXPECT_LT((transfer - std::sqrt(p) * phase * cnot).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(leak_free_total / 4, p, 1e-12);
}

TEST(Provenance, GitBlobHash) {
    EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Provenance, CircuitConstantsHashIsFrozen) {
    // Changes only when the gate constants or the network layout change.
    EXPECT_EQ(circuit_constants_hash(), "765c4c7259fc713966104b7c98d21938eb30eada");
    EXPECT_EQ(circuit_constants_json().at("version"), ns_constants::kVersion);
}

}  // namespace
