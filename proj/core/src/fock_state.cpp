// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/fock_state.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fockhom {

std::size_t OccupationHash::operator()(const Occupation& occ) const noexcept {
    // FNV-1a over the byte counts.
    std::size_t h = 1469598103934665603ull;
    for (auto v : occ) {
        h ^= v;
        h *= 1099511628211ull;
    }
    return h;
}

int total_photons(const Occupation& occ) {
    int n = 0;
    for (auto v : occ) {
        n += v;
    }
    return n;
}

MultimodeFockState::MultimodeFockState(std::size_t mode_count, int cutoff)
    : mode_count_(mode_count), cutoff_(cutoff) {
    if (cutoff < 0 || cutoff > kMaxCutoff) {
        throw std::invalid_argument("MultimodeFockState: cutoff must be in [0, " +
                                    std::to_string(kMaxCutoff) + "]");
    }
}

MultimodeFockState MultimodeFockState::vacuum(std::size_t mode_count, int cutoff) {
    MultimodeFockState s(mode_count, cutoff);
    s.add(Occupation(mode_count, 0), 1.0);
    return s;
}

MultimodeFockState MultimodeFockState::basis(const Occupation& occ, int cutoff) {
    MultimodeFockState s(occ.size(), cutoff);
    s.add(occ, 1.0);
    return s;
}

Amplitude MultimodeFockState::amplitude(const Occupation& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? Amplitude{} : it->second;
}

void MultimodeFockState::add(const Occupation& occ, Amplitude amp) {
    if (occ.size() != mode_count_) {
        throw std::invalid_argument("MultimodeFockState::add: occupation length mismatch");
    }
    for (auto v : occ) {
        if (v > cutoff_) {
            throw std::out_of_range("MultimodeFockState::add: occupation " + std::to_string(v) +
                                    " exceeds cutoff " + std::to_string(cutoff_));
        }
    }
    terms_[occ] += amp;
}

double MultimodeFockState::norm_squared() const {
    double total = 0;
    for (const auto& [occ, amp] : terms_) {
        total += std::norm(amp);
    }
    return total;
}

bool MultimodeFockState::is_normalized(double tol) const {
    return std::abs(norm_squared() - 1.0) <= tol;
}

void MultimodeFockState::check_normalized(double tol) const {
    if (!unnormalized_ && !is_normalized(tol)) {
        std::ostringstream ss;
        ss << "MultimodeFockState: norm^2 = " << norm_squared() << " is not 1";
        throw std::logic_error(ss.str());
    }
}

MultimodeFockState MultimodeFockState::normalized() const {
    double n2 = norm_squared();
    if (n2 <= 0) {
        throw std::domain_error("MultimodeFockState::normalized: zero state");
    }
    MultimodeFockState out = scaled(1.0 / std::sqrt(n2));
    out.unnormalized_ = false;
    return out;
}

MultimodeFockState MultimodeFockState::scaled(Amplitude factor) const {
    MultimodeFockState out = *this;
    for (auto& [occ, amp] : out.terms_) {
        amp *= factor;
    }
    return out;
}

MultimodeFockState MultimodeFockState::tensor(const MultimodeFockState& other) const {
    MultimodeFockState out(mode_count_ + other.mode_count_, std::max(cutoff_, other.cutoff_));
    out.unnormalized_ = unnormalized_ || other.unnormalized_;
    Occupation joined(out.mode_count_);
    for (const auto& [a, x] : terms_) {
        std::copy(a.begin(), a.end(), joined.begin());
        for (const auto& [b, y] : other.terms_) {
            std::copy(b.begin(), b.end(), joined.begin() + static_cast<std::ptrdiff_t>(a.size()));
            out.terms_[joined] += x * y;
        }
    }
    return out;
}

Amplitude MultimodeFockState::inner(const MultimodeFockState& other) const {
    if (other.mode_count_ != mode_count_) {
        throw std::invalid_argument("MultimodeFockState::inner: mode count mismatch");
    }
    Amplitude total{};
    const auto& small = terms_.size() <= other.terms_.size() ? terms_ : other.terms_;
    for (const auto& [occ, unused] : small) {
        (void)unused;
        total += std::conj(amplitude(occ)) * other.amplitude(occ);
    }
    return total;
}

void MultimodeFockState::prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::norm(it->second) <= tol) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

double MultimodeFockState::mean_photon_number(std::size_t mode) const {
    if (mode >= mode_count_) {
        throw std::out_of_range("mean_photon_number: mode index");
    }
    double total = 0;
    for (const auto& [occ, amp] : terms_) {
        total += std::norm(amp) * occ[mode];
    }
    return total;
}

int MultimodeFockState::max_occupation() const {
    int best = 0;
    for (const auto& [occ, amp] : terms_) {
        for (auto v : occ) {
            best = std::max<int>(best, v);
        }
    }
    return best;
}

namespace {

std::size_t dense_index(const Occupation& occ, int cutoff) {
    std::size_t index = 0;
    for (auto v : occ) {
        index = index * static_cast<std::size_t>(cutoff + 1) + v;
    }
    return index;
}

std::size_t dense_dimension(std::size_t modes, int cutoff) {
    std::size_t dim = 1;
    for (std::size_t i = 0; i < modes; ++i) {
        dim *= static_cast<std::size_t>(cutoff + 1);
        if (dim > (1u << 20)) {
            throw std::length_error("dense representation too large");
        }
    }
    return dim;
}

}  // namespace

Eigen::VectorXcd MultimodeFockState::to_dense() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(
        static_cast<Eigen::Index>(dense_dimension(mode_count_, cutoff_)));
    for (const auto& [occ, amp] : terms_) {
        v(static_cast<Eigen::Index>(dense_index(occ, cutoff_))) = amp;
    }
    return v;
}

std::string MultimodeFockState::to_string() const {
    std::ostringstream ss;
    bool first = true;
    for (const auto& [occ, amp] : terms_) {
        if (!first) {
            ss << " + ";
        }
        first = false;
        ss << "(" << amp.real() << (amp.imag() < 0 ? "-" : "+") << std::abs(amp.imag()) << "i)|";
        for (std::size_t i = 0; i < occ.size(); ++i) {
            ss << (i ? "," : "") << int(occ[i]);
        }
        ss << ">";
    }
    return first ? "0" : ss.str();
}

MixedState::MixedState(MultimodeFockState pure) {
    components_.push_back({1.0, std::move(pure)});
}

MixedState::MixedState(std::vector<WeightedState> components) : components_(std::move(components)) {
    if (components_.empty()) {
        return;
    }
    double total = 0;
    for (const auto& c : components_) {
        if (!(c.weight >= 0)) {
            throw std::invalid_argument("MixedState: negative weight");
        }
        if (c.state.mode_count() != components_.front().state.mode_count()) {
            throw std::invalid_argument("MixedState: components disagree on mode count");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("MixedState: weights sum to " + std::to_string(total));
    }
}

std::size_t MixedState::mode_count() const {
    return components_.empty() ? 0 : components_.front().state.mode_count();
}

double MixedState::total_weight() const {
    double total = 0;
    for (const auto& c : components_) {
        total += c.weight;
    }
    return total;
}

MixedState MixedState::tensor(const MixedState& other) const {
    std::vector<WeightedState> out;
    out.reserve(components_.size() * other.components_.size());
    for (const auto& a : components_) {
        for (const auto& b : other.components_) {
            out.push_back({a.weight * b.weight, a.state.tensor(b.state)});
        }
    }
    MixedState m;
    m.components_ = std::move(out);
    return m;
}

MixedState MixedState::compacted() const {
    std::vector<WeightedState> out;
    for (const auto& c : components_) {
        if (c.weight == 0) {
            continue;
        }
        bool merged = false;
        for (auto& o : out) {
            if (o.state.size() != c.state.size()) {
                continue;
            }
            bool same = true;
            for (const auto& [occ, amp] : c.state.terms()) {
                if (std::abs(o.state.amplitude(occ) - amp) > 1e-14) {
                    same = false;
                    break;
                }
            }
            if (same) {
                o.weight += c.weight;
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.push_back(c);
        }
    }
    MixedState m;
    m.components_ = std::move(out);
    return m;
}

Eigen::MatrixXcd MixedState::density_matrix() const {
    if (components_.empty()) {
        throw std::domain_error("density_matrix of empty MixedState");
    }
    int cutoff = 0;
    for (const auto& c : components_) {
        cutoff = std::max(cutoff, c.state.cutoff());
    }
    auto dim = static_cast<Eigen::Index>(dense_dimension(mode_count(), cutoff));
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& c : components_) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
        for (const auto& [occ, amp] : c.state.terms()) {
            v(static_cast<Eigen::Index>(dense_index(occ, cutoff))) = amp;
        }
        rho += c.weight * v * v.adjoint();
    }
    return rho;
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff();
}

ModeUnitary::ModeUnitary(Eigen::MatrixXcd matrix, double tol) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0) {
        throw std::invalid_argument("ModeUnitary: empty matrix");
    }
    double defect = unitarity_defect(matrix_);
    if (!(defect <= tol)) {
        std::ostringstream ss;
        ss << "ModeUnitary: matrix is not unitary (defect " << defect << ")";
        throw std::invalid_argument(ss.str());
    }
}

ModeUnitary ModeUnitary::identity(std::size_t dimension) {
    auto n = static_cast<Eigen::Index>(dimension);
    return ModeUnitary(Eigen::MatrixXcd::Identity(n, n));
}

ModeUnitary ModeUnitary::operator*(const ModeUnitary& other) const {
    if (other.dimension() != dimension()) {
        throw std::invalid_argument("ModeUnitary: dimension mismatch in product");
    }
    return ModeUnitary(matrix_ * other.matrix_);
}

ModeUnitary ModeUnitary::adjoint() const { return ModeUnitary(matrix_.adjoint()); }

ModeUnitary random_unitary(std::size_t dimension, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    auto n = static_cast<Eigen::Index>(dimension);
    Eigen::MatrixXcd z(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            z(i, j) = Amplitude(g(rng), g(rng)) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        Amplitude d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return ModeUnitary(q);
}

}  // namespace fockhom
