// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_NS_GATE_SOLVER_HPP
#define FOCKHOM_NS_GATE_SOLVER_HPP

#include <array>

#include "fockhom/network.hpp"

namespace fockhom {

/// Target herald probability (3 - sqrt 2) / 7 of one NS block.
double ns_success_probability();

/// (A1 - A0, A2 + A0, A0^2 - P) for the given angles; zero at a solution.
std::array<double, 3> ns_gate_residual(const NsGateAngles& angles);

struct NsSolveResult {
    NsGateAngles angles;
    double max_residual;
    int evaluations;
};

/// Derivative-free simplex search from `start`, then a Newton-type polish
/// (MINPACK hybrid method) to machine precision. Throws
/// NumericalContractError when the residual stays above `tolerance`.
NsSolveResult solve_ns_gate(const NsGateAngles& start = {0.6, 4.3, 0.3}, double tolerance = 1e-9);

}  // namespace fockhom

#endif
