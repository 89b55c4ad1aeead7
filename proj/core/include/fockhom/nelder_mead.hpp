// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_NELDER_MEAD_HPP
#define FOCKHOM_NELDER_MEAD_HPP

#include <functional>
#include <vector>

namespace fockhom {

struct NelderMeadOptions {
    double initial_step = 0.1;
    double f_tolerance = 1e-14;
    double x_tolerance = 1e-10;
    int max_evaluations = 20000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value;
    int evaluations;
    bool converged;
};

/// Minimizes f with the standard reflection/expansion/contraction/shrink
/// schedule (coefficients 1, 2, 1/2, 1/2). Deterministic.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace fockhom

#endif
