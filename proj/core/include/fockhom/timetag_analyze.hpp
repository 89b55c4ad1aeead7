// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_TIMETAG_ANALYZE_HPP
#define FOCKHOM_TIMETAG_ANALYZE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "fockhom/timetag_generate.hpp"
#include "fockhom/timetag_io.hpp"

namespace fockhom {

struct AnalysisOptions {
    std::uint64_t pulse_period_ps = 12'300;
    /// Pulses per analysis block; the phase is treated as static inside one.
    std::uint64_t block_length = 20'000;
    /// Bins over the inferred phase in [0, pi].
    int phase_bins = 12;
    /// Largest |k| histogrammed; far peaks are 2 <= |k| <= max_k.
    int max_k = 3;
    /// Known c1 for phase inference; estimated jointly when unset.
    std::optional<double> c1;
    /// eta1 / eta2; estimated from the total singles when unset.
    std::optional<double> efficiency_ratio;
    int bootstrap_samples = 200;
    std::uint64_t bootstrap_seed = 1;
    /// Blocks with fewer singles are flagged and left out of the fits.
    double min_block_counts = 100;

    void validate() const;
};

void to_json(nlohmann::json& j, const AnalysisOptions& o);
void from_json(const nlohmann::json& j, AnalysisOptions& o);

/// Per-bin photon counts rebuilt from a stream. Throws InputFormatError when
/// a timestamp is not a multiple of the pulse period.
BinCounts bin_stream(const TimeTagStream& stream, std::uint64_t pulse_period_ps);

/// Sufficient statistics of one block: singles and coincidences
/// sum_t n_a(t) n_b(t + k) (n(n - 1) for a = b, k = 0) for |k| <= max_k.
struct BlockStats {
    std::uint64_t first_bin = 0;
    std::uint64_t bins = 0;
    double s1 = 0;
    double s2 = 0;
    std::vector<double> c12;  // index k + max_k
    std::vector<double> c11;
    std::vector<double> c22;
};

std::vector<BlockStats> block_statistics(const BinCounts& counts, std::uint64_t block_length, int max_k);

struct BlockPhase {
    std::size_t block = 0;
    std::uint64_t first_bin = 0;
    double singles1 = 0;
    double singles2 = 0;
    /// (I1 / rho - I2) / (I1 / rho + I2), which equals c1 cos phi.
    double imbalance = 0;
    /// acos(imbalance / c1) in [0, pi]; the sign of phi is not observable.
    double phi_hat = 0;
    bool flagged = false;
};

/// Phase of every block from its single counts. Uses options.c1 when set,
/// otherwise the jointly estimated c1 (see estimate_parameters).
std::vector<BlockPhase> infer_phase_blocks(const TimeTagStream& stream, const AnalysisOptions& options);

struct Interval {
    double value = 0;
    double sigma = 0;  // bootstrap standard deviation over blocks
    double lo = 0;     // value -/+ 1.96 sigma
    double hi = 0;

    bool contains(double x, double n_sigma) const { return std::abs(x - value) <= n_sigma * sigma; }
};

struct PhaseBinResult {
    double phi_lo = 0;
    double phi_hi = 0;
    std::size_t blocks = 0;
    double x2 = 0;  // mean noise-corrected imbalance squared
    double g2_k0 = 0;
    double g2_k1 = 0;
    double g2_kfar = 0;
};

struct ParameterEstimate {
    Interval c1;
    /// Amplitude of the cos 2 phi term of the |k| = 1 peak.
    Interval s2;
    /// Phase-averaged g2_k1 / g2_kfar.
    Interval ratio;
    /// From the perpendicular stream when given.
    std::optional<Interval> m;
    double efficiency_ratio = 1;
    double g2_k0_par = 0;
    std::optional<double> g2_k0_perp;
    /// Slope of g2_kfar against the squared imbalance (1 when the model holds).
    double far_slope = 0;
    std::vector<PhaseBinResult> bins;
    std::vector<BlockPhase> blocks;
    std::size_t flagged_blocks = 0;
    int bootstrap_failures = 0;

    nlohmann::json to_json() const;
};

/// Fits the |k| = 1 peak against the squared single-count imbalance x^2:
/// g2_k1 = A + B x^2 gives s2 = 2 (A - 3/4) and c1 = sqrt(-s2 / B). Throws
/// EstimationError when the data cannot support the fit (empty stream, fewer
/// than three populated phase bins, or a fit without a negative slope).
ParameterEstimate estimate_parameters(const TimeTagStream& parallel, const TimeTagStream* perpendicular,
                                      const AnalysisOptions& options);

/// Phase-averaged ratio only; works for any coverage. Throws EstimationError
/// on an empty stream.
Interval estimate_ratio(const TimeTagStream& parallel, const AnalysisOptions& options);

}  // namespace fockhom

#endif
