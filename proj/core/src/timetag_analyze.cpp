// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/timetag_analyze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fockhom/errors.hpp"

namespace fockhom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Peaks {
    std::vector<double> c12, c11, c22;
    double s1 = 0, s2 = 0;
    double x2 = 0;
    std::size_t blocks = 0;

    explicit Peaks(int max_k)
        : c12(static_cast<std::size_t>(2 * max_k + 1), 0.0), c11(c12.size(), 0.0), c22(c12.size(), 0.0) {}

    void add(const BlockStats& b) {
        for (std::size_t i = 0; i < c12.size(); ++i) {
            c12[i] += b.c12[i];
            c11[i] += b.c11[i];
            c22[i] += b.c22[i];
        }
        s1 += b.s1;
        s2 += b.s2;
        ++blocks;
    }
};

double far_mean(const std::vector<double>& c, int max_k) {
    double sum = 0;
    int n = 0;
    for (int k = 2; k <= max_k; ++k) {
        sum += c[static_cast<std::size_t>(max_k + k)] + c[static_cast<std::size_t>(max_k - k)];
        n += 2;
    }
    return sum / n;
}

// Far-peak normalization mu^2/4 with the efficiency ratio folded in.
double normalization(const Peaks& p, double rho, int max_k) {
    return 0.25 * (far_mean(p.c11, max_k) / rho + 2 * far_mean(p.c12, max_k) + rho * far_mean(p.c22, max_k));
}

double imbalance(double s1, double s2, double rho) {
    const double a = s1 / rho;
    return a + s2 > 0 ? (a - s2) / (a + s2) : 0.0;
}

struct Line {
    double a = 0;
    double b = 0;
};

Line weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (!(det > 0)) {
        throw EstimationError("phase-binned fit is degenerate: imbalance does not vary across bins");
    }
    return {(sxx * sy - sx * sxy) / det, (sw * sxy - sx * sy) / det};
}

struct Point {
    double c1 = kNaN;
    double s2 = kNaN;
    double ratio = kNaN;
    double m = kNaN;
    double rho = 1;
    double g0_par = kNaN;
    double g0_perp = kNaN;
    double far_slope = kNaN;
    std::vector<PhaseBinResult> bins;
};

double block_x2(const BlockStats& b, double rho) {
    const double x = imbalance(b.s1, b.s2, rho);
    const double n = b.s1 + b.s2;
    return x * x - (n > 0 ? (1 - x * x) / n : 0.0);
}

bool flagged(const BlockStats& b, const AnalysisOptions& o) { return b.s1 + b.s2 < o.min_block_counts; }

double phase_of(double x, double c1) {
    if (!(c1 > 0)) {
        return std::numbers::pi / 2;
    }
    return std::acos(std::clamp(x / c1, -1.0, 1.0));
}

// Phase-averaged quantities over all blocks.
void fill_averages(Point& p, const std::vector<const BlockStats*>& par, const std::vector<const BlockStats*>& perp,
                   const AnalysisOptions& o) {
    const int K = o.max_k;
    Peaks all(K);
    for (const auto* b : par) {
        all.add(*b);
    }
    if (!(all.s1 > 0 && all.s2 > 0)) {
        throw EstimationError("stream has no counts on one detector");
    }
    p.rho = o.efficiency_ratio.value_or(all.s1 / all.s2);
    const double n = normalization(all, p.rho, K);
    if (!(n > 0)) {
        throw EstimationError("no far-peak coincidences; stream too short");
    }
    const double k1 = 0.5 * (all.c12[K + 1] + all.c12[K - 1]) / n;
    p.ratio = k1 / (far_mean(all.c12, K) / n);
    p.g0_par = all.c12[K] / n;
    if (!perp.empty()) {
        Peaks pp(K);
        for (const auto* b : perp) {
            pp.add(*b);
        }
        const double rho_perp = o.efficiency_ratio.value_or(pp.s2 > 0 ? pp.s1 / pp.s2 : 1.0);
        const double np = normalization(pp, rho_perp, K);
        if (!(np > 0)) {
            throw EstimationError("perpendicular stream has no far-peak coincidences");
        }
        p.g0_perp = pp.c12[K] / np;
        p.m = 1 - p.g0_par / p.g0_perp;
    }
}

// Bins blocks by the phase inferred with `c1` and fits the |k| = 1 peak.
void fit_bins(Point& p, const std::vector<const BlockStats*>& par, double c1, const AnalysisOptions& o) {
    const int K = o.max_k;
    const int nb = o.phase_bins;
    std::vector<Peaks> bins(static_cast<std::size_t>(nb), Peaks(K));
    for (const auto* b : par) {
        if (flagged(*b, o)) {
            continue;
        }
        const double phi = phase_of(imbalance(b->s1, b->s2, p.rho), c1);
        const int i = std::min(nb - 1, static_cast<int>(phi / std::numbers::pi * nb));
        bins[static_cast<std::size_t>(i)].add(*b);
        bins[static_cast<std::size_t>(i)].x2 += block_x2(*b, p.rho);
    }
    std::vector<double> x, y1, yf, w;
    p.bins.clear();
    for (int i = 0; i < nb; ++i) {
        const Peaks& q = bins[static_cast<std::size_t>(i)];
        PhaseBinResult r;
        r.phi_lo = std::numbers::pi * i / nb;
        r.phi_hi = std::numbers::pi * (i + 1) / nb;
        r.blocks = q.blocks;
        const double n = q.blocks > 0 ? normalization(q, p.rho, K) : 0.0;
        if (n > 0) {
            r.x2 = q.x2 / static_cast<double>(q.blocks);
            r.g2_k0 = q.c12[K] / n;
            r.g2_k1 = 0.5 * (q.c12[K + 1] + q.c12[K - 1]) / n;
            r.g2_kfar = far_mean(q.c12, K) / n;
            const double counts = q.c12[K + 1] + q.c12[K - 1];
            if (counts > 0) {
                x.push_back(r.x2);
                y1.push_back(r.g2_k1);
                yf.push_back(r.g2_kfar);
                w.push_back(counts);
            }
        }
        p.bins.push_back(r);
    }
    if (x.size() < 3) {
        throw EstimationError("insufficient phase coverage: fewer than three populated phase bins");
    }
    const Line k1 = weighted_line(x, y1, w);
    const Line far = weighted_line(x, yf, w);
    p.far_slope = -far.b;
    p.s2 = 2 * (k1.a - 0.75);
    if (!(p.s2 > 0 && k1.b < 0)) {
        throw EstimationError("no phase modulation of the |k|=1 peak; c1 not identifiable");
    }
    p.c1 = std::sqrt(-p.s2 / k1.b);
}

Point fit(const std::vector<const BlockStats*>& par, const std::vector<const BlockStats*>& perp,
          const AnalysisOptions& o, bool with_phase_fit) {
    Point p;
    fill_averages(p, par, perp, o);
    if (!with_phase_fit) {
        return p;
    }
    double c = 0;
    if (o.c1) {
        c = *o.c1;
    } else {
        for (const auto* b : par) {
            if (!flagged(*b, o)) {
                c = std::max(c, std::abs(imbalance(b->s1, b->s2, p.rho)));
            }
        }
    }
    // Binning depends on c1 only through the bin edges; a few passes settle it.
    constexpr int kPasses = 4;
    for (int pass = 0; pass < kPasses; ++pass) {
        fit_bins(p, par, c, o);
        if (o.c1) {
            break;
        }
        c = p.c1;
    }
    return p;
}

std::vector<const BlockStats*> pointers(const std::vector<BlockStats>& v) {
    std::vector<const BlockStats*> out;
    out.reserve(v.size());
    for (const auto& b : v) {
        out.push_back(&b);
    }
    return out;
}

Interval make_interval(double value, const std::vector<double>& samples) {
    Interval iv{value, kNaN, kNaN, kNaN};
    if (samples.size() >= 2) {
        double mean = 0;
        for (double s : samples) {
            mean += s;
        }
        mean /= static_cast<double>(samples.size());
        double var = 0;
        for (double s : samples) {
            var += (s - mean) * (s - mean);
        }
        iv.sigma = std::sqrt(var / static_cast<double>(samples.size() - 1));
        iv.lo = value - 1.96 * iv.sigma;
        iv.hi = value + 1.96 * iv.sigma;
    }
    return iv;
}

std::vector<const BlockStats*> resample(const std::vector<BlockStats>& v, SplitMix64& rng) {
    std::vector<const BlockStats*> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(&v[static_cast<std::size_t>(rng.uniform() * static_cast<double>(v.size()))]);
    }
    return out;
}

std::vector<BlockStats> stream_blocks(const TimeTagStream& s, const AnalysisOptions& o) {
    if (s.empty()) {
        throw EstimationError("time-tag stream is empty");
    }
    return block_statistics(bin_stream(s, o.pulse_period_ps), o.block_length, o.max_k);
}

std::vector<BlockPhase> block_phases(const std::vector<BlockStats>& blocks, double rho, double c1,
                                     const AnalysisOptions& o) {
    std::vector<BlockPhase> out;
    out.reserve(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        BlockPhase bp;
        bp.block = i;
        bp.first_bin = b.first_bin;
        bp.singles1 = b.s1;
        bp.singles2 = b.s2;
        bp.imbalance = imbalance(b.s1, b.s2, rho);
        bp.phi_hat = phase_of(bp.imbalance, c1);
        bp.flagged = flagged(b, o);
        out.push_back(bp);
    }
    return out;
}

}  // namespace

void AnalysisOptions::validate() const {
    if (pulse_period_ps == 0) {
        throw std::invalid_argument("AnalysisOptions: pulse period must be positive");
    }
    if (max_k < 2) {
        throw std::invalid_argument("AnalysisOptions: max_k must be at least 2");
    }
    if (block_length < static_cast<std::uint64_t>(4 * max_k)) {
        throw std::invalid_argument("AnalysisOptions: block length too short");
    }
    if (phase_bins < 3) {
        throw std::invalid_argument("AnalysisOptions: need at least three phase bins");
    }
    if (c1 && !(*c1 > 0 && *c1 <= 1)) {
        throw std::invalid_argument("AnalysisOptions: c1 must be in (0, 1]");
    }
    if (efficiency_ratio && !(*efficiency_ratio > 0)) {
        throw std::invalid_argument("AnalysisOptions: efficiency ratio must be positive");
    }
    if (bootstrap_samples < 0) {
        throw std::invalid_argument("AnalysisOptions: bootstrap samples must be >= 0");
    }
}

void to_json(nlohmann::json& j, const AnalysisOptions& o) {
    j = {{"pulse_period_ps", o.pulse_period_ps},
         {"block_length", o.block_length},
         {"phase_bins", o.phase_bins},
         {"max_k", o.max_k},
         {"c1", o.c1 ? nlohmann::json(*o.c1) : nlohmann::json(nullptr)},
         {"efficiency_ratio", o.efficiency_ratio ? nlohmann::json(*o.efficiency_ratio) : nlohmann::json(nullptr)},
         {"bootstrap_samples", o.bootstrap_samples},
         {"bootstrap_seed", o.bootstrap_seed},
         {"min_block_counts", o.min_block_counts}};
}

void from_json(const nlohmann::json& j, AnalysisOptions& o) {
    o = AnalysisOptions{};
    o.pulse_period_ps = j.value("pulse_period_ps", o.pulse_period_ps);
    o.block_length = j.value("block_length", o.block_length);
    o.phase_bins = j.value("phase_bins", o.phase_bins);
    o.max_k = j.value("max_k", o.max_k);
    if (j.contains("c1") && !j.at("c1").is_null()) {
        o.c1 = j.at("c1").get<double>();
    }
    if (j.contains("efficiency_ratio") && !j.at("efficiency_ratio").is_null()) {
        o.efficiency_ratio = j.at("efficiency_ratio").get<double>();
    }
    o.bootstrap_samples = j.value("bootstrap_samples", o.bootstrap_samples);
    o.bootstrap_seed = j.value("bootstrap_seed", o.bootstrap_seed);
    o.min_block_counts = j.value("min_block_counts", o.min_block_counts);
    o.validate();
}

BinCounts bin_stream(const TimeTagStream& stream, std::uint64_t pulse_period_ps) {
    validate_stream(stream);
    BinCounts c;
    if (stream.empty()) {
        return c;
    }
    const std::uint64_t bins = stream.back().timestamp_ps / pulse_period_ps + 1;
    c.n1.assign(bins, 0);
    c.n2.assign(bins, 0);
    for (const auto& r : stream) {
        if (r.timestamp_ps % pulse_period_ps != 0) {
            throw InputFormatError("timestamp " + std::to_string(r.timestamp_ps) +
                                   " is not on the pulse grid");
        }
        auto& v = r.detector_id == 1 ? c.n1 : c.n2;
        auto& n = v[r.timestamp_ps / pulse_period_ps];
        if (n == 255) {
            throw InputFormatError("more than 255 detections in one bin");
        }
        ++n;
    }
    return c;
}

std::vector<BlockStats> block_statistics(const BinCounts& counts, std::uint64_t block_length, int max_k) {
    std::vector<BlockStats> out;
    const std::uint64_t n = counts.size();
    const std::size_t width = static_cast<std::size_t>(2 * max_k + 1);
    for (std::uint64_t start = 0; start < n; start += block_length) {
        BlockStats b;
        b.first_bin = start;
        b.bins = std::min(block_length, n - start);
        b.c12.assign(width, 0.0);
        b.c11.assign(width, 0.0);
        b.c22.assign(width, 0.0);
        for (std::uint64_t t = start; t < start + b.bins; ++t) {
            const double a1 = counts.n1[t];
            const double a2 = counts.n2[t];
            b.s1 += a1;
            b.s2 += a2;
            if (a1 == 0 && a2 == 0) {
                continue;
            }
            for (int k = -max_k; k <= max_k; ++k) {
                const auto u = static_cast<std::int64_t>(t) + k;
                if (u < 0 || u >= static_cast<std::int64_t>(n)) {
                    continue;
                }
                const double b1 = counts.n1[static_cast<std::size_t>(u)];
                const double b2 = counts.n2[static_cast<std::size_t>(u)];
                const auto i = static_cast<std::size_t>(k + max_k);
                b.c12[i] += a1 * b2;
                b.c11[i] += k == 0 ? a1 * (a1 - 1) : a1 * b1;
                b.c22[i] += k == 0 ? a2 * (a2 - 1) : a2 * b2;
            }
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<BlockPhase> infer_phase_blocks(const TimeTagStream& stream, const AnalysisOptions& options) {
    options.validate();
    const auto blocks = stream_blocks(stream, options);
    const auto ptrs = pointers(blocks);
    Point p;
    if (options.c1) {
        fill_averages(p, ptrs, {}, options);
        p.c1 = *options.c1;
    } else {
        p = fit(ptrs, {}, options, true);
    }
    return block_phases(blocks, p.rho, p.c1, options);
}

ParameterEstimate estimate_parameters(const TimeTagStream& parallel, const TimeTagStream* perpendicular,
                                      const AnalysisOptions& options) {
    options.validate();
    const auto par = stream_blocks(parallel, options);
    std::vector<BlockStats> perp;
    if (perpendicular) {
        perp = stream_blocks(*perpendicular, options);
    }
    const Point p = fit(pointers(par), pointers(perp), options, true);

    std::vector<double> c1s, s2s, ratios, ms;
    int failures = 0;
    SplitMix64 rng(SplitMix64::mix(options.bootstrap_seed));
    for (int i = 0; i < options.bootstrap_samples; ++i) {
        const auto rp = resample(par, rng);
        const auto rq = perp.empty() ? std::vector<const BlockStats*>{} : resample(perp, rng);
        try {
            const Point q = fit(rp, rq, options, true);
            c1s.push_back(q.c1);
            s2s.push_back(q.s2);
            ratios.push_back(q.ratio);
            if (!rq.empty()) {
                ms.push_back(q.m);
            }
        } catch (const EstimationError&) {
            ++failures;
        }
    }

    ParameterEstimate e;
    e.c1 = make_interval(p.c1, c1s);
    e.s2 = make_interval(p.s2, s2s);
    e.ratio = make_interval(p.ratio, ratios);
    if (perpendicular) {
        e.m = make_interval(p.m, ms);
        e.g2_k0_perp = p.g0_perp;
    }
    e.efficiency_ratio = p.rho;
    e.g2_k0_par = p.g0_par;
    e.far_slope = p.far_slope;
    e.bins = p.bins;
    e.blocks = block_phases(par, p.rho, p.c1, options);
    e.flagged_blocks = static_cast<std::size_t>(
        std::count_if(e.blocks.begin(), e.blocks.end(), [](const BlockPhase& b) { return b.flagged; }));
    e.bootstrap_failures = failures;
    return e;
}

Interval estimate_ratio(const TimeTagStream& parallel, const AnalysisOptions& options) {
    options.validate();
    const auto par = stream_blocks(parallel, options);
    const Point p = fit(pointers(par), {}, options, false);
    std::vector<double> ratios;
    SplitMix64 rng(SplitMix64::mix(options.bootstrap_seed));
    for (int i = 0; i < options.bootstrap_samples; ++i) {
        try {
            ratios.push_back(fit(resample(par, rng), {}, options, false).ratio);
        } catch (const EstimationError&) {
        }
    }
    return make_interval(p.ratio, ratios);
}

nlohmann::json ParameterEstimate::to_json() const {
    auto iv = [](const Interval& i) {
        return nlohmann::json{{"value", i.value}, {"sigma", i.sigma}, {"lo", i.lo}, {"hi", i.hi}};
    };
    nlohmann::json bj = nlohmann::json::array();
    for (const auto& b : bins) {
        bj.push_back({{"phi_lo", b.phi_lo},
                      {"phi_hi", b.phi_hi},
                      {"blocks", b.blocks},
                      {"x2", b.x2},
                      {"g2_k0", b.g2_k0},
                      {"g2_k1", b.g2_k1},
                      {"g2_kfar", b.g2_kfar}});
    }
    nlohmann::json j{{"c1", iv(c1)},
                     {"s2", iv(s2)},
                     {"ratio", iv(ratio)},
                     {"m", m ? iv(*m) : nlohmann::json(nullptr)},
                     {"efficiency_ratio", efficiency_ratio},
                     {"g2_k0_par", g2_k0_par},
                     {"g2_k0_perp", g2_k0_perp ? nlohmann::json(*g2_k0_perp) : nlohmann::json(nullptr)},
                     {"far_slope", far_slope},
                     {"phase_bins", bj},
                     {"blocks", blocks.size()},
                     {"flagged_blocks", flagged_blocks},
                     {"bootstrap_failures", bootstrap_failures}};
    return j;
}

}  // namespace fockhom
