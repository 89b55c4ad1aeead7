// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_FOCK_STATE_HPP
#define FOCKHOM_FOCK_STATE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fockhom {

using Amplitude = std::complex<double>;

/// Photon count per mode. Ordered lexicographically, which fixes the basis
/// order everywhere (iteration, serialization, golden files).
using Occupation = std::vector<std::uint8_t>;

struct OccupationHash {
    std::size_t operator()(const Occupation& occ) const noexcept;
};

int total_photons(const Occupation& occ);

/// Sparse pure state over a multimode occupation-number basis.
///
/// The state is a builder while being assembled with add(); call
/// check_normalized() (or rely on an operation that preserves norm) to
/// enforce the normalization invariant. States produced by projections are
/// tagged unnormalized instead.
class MultimodeFockState {
   public:
    static constexpr int kDefaultCutoff = 2;
    static constexpr int kMaxCutoff = 4;

    MultimodeFockState() = default;
    /// mode_count 0 is allowed and denotes a scalar (e.g. the conditional
    /// state left after every mode has been projected).
    MultimodeFockState(std::size_t mode_count, int cutoff);

    static MultimodeFockState vacuum(std::size_t mode_count, int cutoff = kDefaultCutoff);
    static MultimodeFockState basis(const Occupation& occ, int cutoff = kDefaultCutoff);

    std::size_t mode_count() const { return mode_count_; }
    int cutoff() const { return cutoff_; }
    const std::map<Occupation, Amplitude>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool has_terms() const { return !terms_.empty(); }

    Amplitude amplitude(const Occupation& occ) const;

    /// Accumulates `amp` onto the coefficient of `occ`.
    void add(const Occupation& occ, Amplitude amp);

    double norm_squared() const;
    bool is_normalized(double tol = 1e-12) const;
    /// Throws std::logic_error unless the state is normalized or tagged.
    void check_normalized(double tol = 1e-12) const;

    bool tagged_unnormalized() const { return unnormalized_; }
    void tag_unnormalized(bool value = true) { unnormalized_ = value; }

    MultimodeFockState normalized() const;
    MultimodeFockState scaled(Amplitude factor) const;
    /// Product state over the concatenated modes (this first).
    MultimodeFockState tensor(const MultimodeFockState& other) const;
    /// <this|other>.
    Amplitude inner(const MultimodeFockState& other) const;
    /// Drops terms with |amp|^2 <= tol.
    void prune(double tol = 0.0);

    double mean_photon_number(std::size_t mode) const;
    /// Largest per-mode photon count carried by any term.
    int max_occupation() const;

    /// Dense vector over all occupations with entries 0..cutoff, lexicographic.
    Eigen::VectorXcd to_dense() const;

    std::string to_string() const;

   private:
    std::size_t mode_count_ = 0;
    int cutoff_ = kDefaultCutoff;
    bool unnormalized_ = false;
    std::map<Occupation, Amplitude> terms_;
};

struct WeightedState {
    double weight;
    MultimodeFockState state;
};

/// Ensemble of pure states. An empty MixedState is the explicit marker for
/// "nothing matched" and carries no components.
class MixedState {
   public:
    MixedState() = default;
    explicit MixedState(MultimodeFockState pure);
    /// Weights must be nonnegative and sum to 1 within 1e-12.
    explicit MixedState(std::vector<WeightedState> components);

    bool empty() const { return components_.empty(); }
    bool is_pure() const { return components_.size() == 1; }
    const std::vector<WeightedState>& components() const { return components_; }
    std::size_t mode_count() const;
    double total_weight() const;

    /// Product of independent subsystems; component count multiplies.
    MixedState tensor(const MixedState& other) const;

    /// Merges components whose states are equal up to 1e-14 per amplitude.
    MixedState compacted() const;

    /// Dense density matrix over the cutoff-bounded basis (small systems only).
    Eigen::MatrixXcd density_matrix() const;

   private:
    std::vector<WeightedState> components_;
};

/// Matrix acting on creation operators: a_i^dag -> sum_j u(j, i) a_j^dag.
/// Column i is the image of input mode i.
class ModeUnitary {
   public:
    static constexpr double kTolerance = 1e-10;

    explicit ModeUnitary(Eigen::MatrixXcd matrix, double tol = kTolerance);
    static ModeUnitary identity(std::size_t dimension);

    std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    Amplitude operator()(std::size_t row, std::size_t col) const { return matrix_(row, col); }

    /// Returns this * other, i.e. `other` acts first.
    ModeUnitary operator*(const ModeUnitary& other) const;
    ModeUnitary adjoint() const;

   private:
    Eigen::MatrixXcd matrix_;
};

/// max |(U^dag U - I)_ij|.
double unitarity_defect(const Eigen::MatrixXcd& m);

/// Haar-distributed unitary from a seeded generator (test and benchmark helper).
ModeUnitary random_unitary(std::size_t dimension, std::uint64_t seed);

}  // namespace fockhom

#endif
