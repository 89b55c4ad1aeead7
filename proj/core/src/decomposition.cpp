// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/decomposition.hpp"

#include <cmath>

namespace fockhom {

UnitaryDecomposition decompose(const ModeUnitary& u) {
    const Eigen::Index n = static_cast<Eigen::Index>(u.dimension());
    Eigen::MatrixXcd a = u.matrix();
    UnitaryDecomposition d;
    // Left-multiplying by Givens rotations G_k ... G_1 U = D.
    for (Eigen::Index c = 0; c + 1 < n; ++c) {
        for (Eigen::Index r = n - 1; r > c; --r) {
            Amplitude x = a(r - 1, c);
            Amplitude y = a(r, c);
            if (std::abs(y) == 0) {
                continue;
            }
            double rho = std::hypot(std::abs(x), std::abs(y));
            Eigen::Matrix2cd g;
            g << std::conj(x) / rho, std::conj(y) / rho, -y / rho, x / rho;
            Eigen::MatrixXcd rows(2, n);
            rows.row(0) = a.row(r - 1);
            rows.row(1) = a.row(r);
            rows = g * rows;
            a.row(r - 1) = rows.row(0);
            a.row(r) = rows.row(1);
            a(r, c) = 0;
            d.rotations.push_back({static_cast<std::size_t>(r - 1), static_cast<std::size_t>(r),
                                   g.adjoint()});
        }
    }
    d.phases.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        Amplitude p = a(i, i);
        d.phases[static_cast<std::size_t>(i)] = p / std::abs(p);
    }
    return d;
}

Eigen::MatrixXcd reconstruct(const UnitaryDecomposition& d, std::size_t dimension) {
    auto n = static_cast<Eigen::Index>(dimension);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    for (const auto& r : d.rotations) {
        Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(n, n);
        auto ia = static_cast<Eigen::Index>(r.mode_a);
        auto ib = static_cast<Eigen::Index>(r.mode_b);
        e(ia, ia) = r.matrix(0, 0);
        e(ia, ib) = r.matrix(0, 1);
        e(ib, ia) = r.matrix(1, 0);
        e(ib, ib) = r.matrix(1, 1);
        m = m * e;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        m.col(i) *= d.phases[static_cast<std::size_t>(i)];
    }
    return m;
}

}  // namespace fockhom
