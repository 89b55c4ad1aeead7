// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "fockhom/errors.hpp"
#include "fockhom/fock_ops.hpp"
#include "fockhom/nelder_mead.hpp"
#include "fockhom/network.hpp"
#include "fockhom/ns_gate_constants.hpp"
#include "fockhom/ns_gate_solver.hpp"

namespace fockhom {

namespace {

constexpr std::size_t kSignal = 0;
constexpr std::size_t kPhotonAncilla = 1;
constexpr std::size_t kVacuumAncilla = 2;

// The three rotations of one NS block on (signal, photon ancilla, vacuum ancilla).
void append_ns_block(InterferometerNetwork& net, std::size_t s, std::size_t a1, std::size_t a2,
                     const NsGateAngles& g) {
    append_rotation(net, a1, a2, g.a);
    append_rotation(net, s, a1, g.b);
    append_rotation(net, a1, a2, g.c);
}

InterferometerNetwork ns_network(const NsGateAngles& g) {
    InterferometerNetwork net({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    append_ns_block(net, kSignal, kPhotonAncilla, kVacuumAncilla, g);
    return net;
}

}  // namespace

double ns_success_probability() { return (3.0 - std::numbers::sqrt2) / 7.0; }

std::array<Amplitude, 3> ns_gate_amplitudes(const NsGateAngles& angles) {
    ModeUnitary u = compile(ns_network(angles));
    std::array<Amplitude, 3> out{};
    for (int n = 0; n <= 2; ++n) {
        Occupation occ{static_cast<std::uint8_t>(n), 1, 0};
        auto s = apply_mode_unitary(MultimodeFockState::basis(occ, 3), u);
        out[static_cast<std::size_t>(n)] = s.amplitude(occ);
    }
    return out;
}

std::array<double, 3> ns_gate_residual(const NsGateAngles& angles) {
    auto a = ns_gate_amplitudes(angles);
    // Real rotations give real amplitudes up to rounding in the phase factors.
    return {std::real(a[1] - a[0]), std::real(a[2] + a[0]),
            std::norm(a[0]) - ns_success_probability()};
}

namespace {

double max_abs(const std::array<double, 3>& r) {
    return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

struct NsFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    int inputs() const { return 3; }
    int values() const { return 3; }
    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        auto r = ns_gate_residual({x(0), x(1), x(2)});
        f = Eigen::Vector3d(r[0], r[1], r[2]);
        return 0;
    }
};

}  // namespace

NsSolveResult solve_ns_gate(const NsGateAngles& start, double tolerance) {
    auto objective = [](const std::vector<double>& x) {
        auto r = ns_gate_residual({x[0], x[1], x[2]});
        return r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    };
    NelderMeadOptions opt;
    opt.initial_step = 0.05;
    opt.f_tolerance = 1e-20;
    opt.x_tolerance = 1e-12;
    auto coarse = nelder_mead(objective, {start.a, start.b, start.c}, opt);

    Eigen::VectorXd x(3);
    x << coarse.x[0], coarse.x[1], coarse.x[2];
    Eigen::NumericalDiff<NsFunctor> functor;
    Eigen::HybridNonLinearSolver<Eigen::NumericalDiff<NsFunctor>> solver(functor);
    solver.parameters.xtol = 1e-15;
    solver.hybrj1(x);

    NsSolveResult result{{x(0), x(1), x(2)}, 0.0, coarse.evaluations};
    result.max_residual = max_abs(ns_gate_residual(result.angles));
    if (!(result.max_residual <= tolerance)) {
        std::ostringstream ss;
        ss << "NS gate solve failed: residual " << result.max_residual << " > " << tolerance;
        throw NumericalContractError(ss.str());
    }
    return result;
}

NsGate build_ns_gate() {
    return build_ns_gate({ns_constants::kAngleA, ns_constants::kAngleB, ns_constants::kAngleC});
}

NsGate build_ns_gate(const NsGateAngles& angles) {
    auto a = ns_gate_amplitudes(angles);
    const double p = ns_success_probability();
    const double err = std::max({std::abs(a[1] - a[0]), std::abs(a[2] + a[0]), std::abs(std::norm(a[0]) - p)});
    if (!(err <= 1e-9)) {
        std::ostringstream ss;
        ss << "NS gate contract violated: max deviation " << err;
        throw NumericalContractError(ss.str());
    }
    NsGate gate{ns_network(angles), {}, angles, p};
    gate.herald.counts = {{kPhotonAncilla, 1}, {kVacuumAncilla, 0}};
    return gate;
}

HeraldedCnot build_heralded_cnot() {
    const NsGate ns = build_ns_gate();
    using M = CnotModes;
    std::vector<ModeLabel> labels;
    for (int i = 0; i < 8; ++i) {
        labels.push_back({i, 0, 0});
    }
    HeraldedCnot g{InterferometerNetwork(std::move(labels)), {}, ns.angles};
    const double q = std::numbers::pi / 4;
    auto& net = g.network;
    append_rotation(net, M::t0, M::t1, q);
    append_rotation(net, M::c1, M::t0, q);
    append_ns_block(net, M::c1, M::h1, M::h0, ns.angles);
    append_ns_block(net, M::t0, M::h3, M::h2, ns.angles);
    append_rotation(net, M::c1, M::t0, -q);
    append_rotation(net, M::t0, M::t1, -q);
    g.herald.counts = {{M::h0, 0}, {M::h1, 1}, {M::h2, 0}, {M::h3, 1}};
    return g;
}

nlohmann::json circuit_constants_json() {
    const HeraldedCnot g = build_heralded_cnot();
    nlohmann::json herald = nlohmann::json::object();
    for (const auto& [mode, count] : g.herald.counts) {
        herald[std::to_string(mode)] = count;
    }
    return {{"version", ns_constants::kVersion},
            {"ns_angles", {{"a", g.ns_angles.a}, {"b", g.ns_angles.b}, {"c", g.ns_angles.c}}},
            {"cnot_network", g.network.to_json()},
            {"herald", herald}};
}

}  // namespace fockhom
