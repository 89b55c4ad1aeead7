// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_DECOMPOSITION_HPP
#define FOCKHOM_DECOMPOSITION_HPP

#include <vector>

#include "fockhom/fock_state.hpp"

namespace fockhom {

struct TwoModeRotation {
    std::size_t mode_a;
    std::size_t mode_b;
    Eigen::Matrix2cd matrix;
};

/// U = R_0 R_1 ... R_{k-1} diag(phases). Applying U to a state therefore
/// means: phases first, then rotations from the back of the list to the front.
struct UnitaryDecomposition {
    std::vector<TwoModeRotation> rotations;
    std::vector<Amplitude> phases;
};

/// Givens elimination over adjacent mode pairs.
UnitaryDecomposition decompose(const ModeUnitary& u);

Eigen::MatrixXcd reconstruct(const UnitaryDecomposition& d, std::size_t dimension);

}  // namespace fockhom

#endif
