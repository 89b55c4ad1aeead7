// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/hom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fockhom/fock_ops.hpp"

namespace fockhom {

std::string to_string(DetectorPair p) {
    switch (p) {
        case DetectorPair::kD1D2:
            return "D1D2";
        case DetectorPair::kD1D1:
            return "D1D1";
        case DetectorPair::kD2D2:
            return "D2D2";
    }
    return "?";
}

double CorrelationHistogram::area(DetectorPair p, int k) const {
    auto it = peak_areas.find({p, k});
    if (it == peak_areas.end()) {
        throw std::out_of_range("CorrelationHistogram: no peak " + to_string(p) + " k=" + std::to_string(k));
    }
    return it->second;
}

double CorrelationHistogram::g2(DetectorPair p, int k) const {
    if (!(normalization > 0)) {
        throw std::domain_error("CorrelationHistogram: zero normalization");
    }
    double a = area(p, k);
    if (p == DetectorPair::kD1D1) {
        a /= efficiency_ratio;
    } else if (p == DetectorPair::kD2D2) {
        a *= efficiency_ratio;
    }
    return a / normalization;
}

double CorrelationHistogram::g2_k1() const {
    return 0.5 * (g2(DetectorPair::kD1D2, 1) + g2(DetectorPair::kD1D2, -1));
}

int CorrelationHistogram::max_k() const {
    int m = 0;
    for (const auto& [key, v] : peak_areas) {
        m = std::max(m, std::abs(key.k));
    }
    return m;
}

double normalization_factor(double g11_far, double g12_far, double g22_far, double efficiency_ratio) {
    if (!(efficiency_ratio > 0)) {
        throw std::invalid_argument("normalization_factor: efficiency ratio must be positive");
    }
    const double n = 0.25 * (g11_far / efficiency_ratio + 2 * g12_far + efficiency_ratio * g22_far);
    if (!(n > 0)) {
        throw std::domain_error("normalization_factor: zero total counts");
    }
    return n;
}

double vhom(double g2_k0_par, double g2_k0_perp) {
    if (g2_k0_perp == 0) {
        throw std::domain_error("vhom: zero perpendicular peak");
    }
    return 1 - g2_k0_par / g2_k0_perp;
}

double ratio_phase_averaged(double c1) {
    if (!(c1 >= 0 && c1 <= 1)) {
        throw std::invalid_argument("ratio_phase_averaged: c1 must be in [0, 1]");
    }
    return 3.0 / (4.0 - 2.0 * c1 * c1);
}

double c1_from_ratio(double r) {
    if (!(r >= 0.75 && r <= 1.5)) {
        throw std::domain_error("c1_from_ratio: ratio " + std::to_string(r) +
                                " outside [3/4, 3/2]; multi-photon correction needed");
    }
    return std::sqrt(std::max(0.0, (4.0 - 3.0 / r) / 2.0));
}

double delta_m(double c1, double m) {
    if (!(c1 >= 0 && c1 <= 1 && m >= 0 && m <= 1)) {
        throw std::invalid_argument("delta_m: c1 and m must be in [0, 1]");
    }
    const double h = c1 * c1 / 2;
    return (1 - m) * h / (1 - h);
}

double g2_kfar_analytic(double c1, double phi) {
    const double x = c1 * std::cos(phi);
    return 1 - x * x;
}

double g2_k1_analytic(double s, double phi) { return 0.25 + 0.5 * (1 - s * std::cos(2 * phi)); }

namespace {

MziOptions mzi_options(const SourcePulseSpec& source, double phi, bool perpendicular, const HomOptions& o) {
    MziOptions mo;
    mo.window = o.window;
    mo.phi = phi;
    mo.r1 = o.r1;
    mo.r2 = o.r2;
    mo.perpendicular = perpendicular;
    mo.internal_modes = source.m_overlap < 1 ? 3 : 1;
    return mo;
}

struct MziSetup {
    MziNetwork mzi;
    MixedState input;
};

// Builds the W-pulse input: pulse t occupies input bin t, internal lane 0 for
// the shared wavepacket and lane 1 + (t mod 2) for its unique wavepacket.
// Pulses t and t + 2 never reach the same output bin, so two unique lanes
// keep every pair of unique wavepackets distinguishable.
MziSetup make_setup(const SourcePulseSpec& source, double phi, bool perpendicular, const HomOptions& o) {
    const bool distinguishable = source.m_overlap < 1;
    MziSetup setup{build_unbalanced_mzi(mzi_options(source, phi, perpendicular, o)), {}};

    const int cutoff = source.p2.has_value() ? 4 : 2;
    const std::size_t n = setup.mzi.network.mode_count();
    const MixedState pulse = source_state(source);

    std::vector<WeightedState> acc;
    acc.push_back({1.0, MultimodeFockState::vacuum(n, cutoff)});
    for (int t = 0; t < o.window; ++t) {
        const std::size_t shared = setup.mzi.input_mode(t, 0);
        const std::size_t unique = distinguishable ? setup.mzi.input_mode(t, 1 + t % 2) : shared;
        std::vector<WeightedState> next;
        next.reserve(acc.size() * pulse.components().size());
        for (const auto& a : acc) {
            for (const auto& p : pulse.components()) {
                MultimodeFockState s(n, cutoff);
                for (const auto& [occ, amp] : a.state.terms()) {
                    for (const auto& [pocc, pamp] : p.state.terms()) {
                        Occupation o2 = occ;
                        o2[shared] += pocc[kSharedMode];
                        o2[unique] += pocc[kUniqueMode];
                        s.add(o2, amp * pamp);
                    }
                }
                next.push_back({a.weight * p.weight, std::move(s)});
            }
        }
        acc = std::move(next);
    }
    setup.input = MixedState(std::move(acc));
    return setup;
}

// Input propagated through the phase-independent part of the MZI (BS1 and
// the delay); the remaining ops are re-lowered per phase.
struct Prepared {
    MziNetwork mzi;
    std::vector<WeightedState> stage1;
    std::size_t split = 0;
};

Prepared prepare(const SourcePulseSpec& source, bool perpendicular, const HomOptions& o) {
    MziSetup setup = make_setup(source, 0.0, perpendicular, o);
    const auto ops = lower(setup.mzi.network);
    std::size_t split = 0;
    while (split < ops.size() && ops[split].kind != ModeOp::Kind::kPhase) {
        ++split;
    }
    Prepared p{setup.mzi, {}, split};
    std::span<const ModeOp> head(ops.data(), split);
    for (const auto& c : setup.input.components()) {
        p.stage1.push_back({c.weight, apply_mode_ops(c.state, head)});
    }
    return p;
}

MixedState output_at(const Prepared& p, double phi, MziNetwork& mzi_out) {
    MziOptions mo = p.mzi.options;
    mo.phi = phi;
    mzi_out = build_unbalanced_mzi(mo);
    const auto ops = lower(mzi_out.network);
    std::span<const ModeOp> tail(ops.data() + p.split, ops.size() - p.split);
    std::vector<WeightedState> out;
    out.reserve(p.stage1.size());
    for (const auto& c : p.stage1) {
        out.push_back({c.weight, apply_mode_ops(c.state, tail)});
    }
    return MixedState(std::move(out));
}

struct RawHistogram {
    std::map<PeakKey, double> areas;
    double s1 = 0;
    double s2 = 0;
};

RawHistogram measure(const MixedState& out, const MziNetwork& mzi, const HomOptions& o) {
    RawHistogram h;
    const int w = o.window;
    const int kmax = w - 2;
    const double e1 = o.eta1;
    const double e2 = o.eta2;
    for (int k = -kmax; k <= kmax; ++k) {
        // First bin chosen so both bins are interior (1..W-1).
        const int t0 = k >= 0 ? 1 : w - 1;
        const int t1 = t0 + k;
        auto d1a = mzi.detector_modes(1, t0);
        auto d2a = mzi.detector_modes(2, t0);
        auto d1b = mzi.detector_modes(1, t1);
        auto d2b = mzi.detector_modes(2, t1);
        h.areas[{DetectorPair::kD1D2, k}] = e1 * e2 * normally_ordered_g2(out, d1a, d2b);
        h.areas[{DetectorPair::kD1D1, k}] = e1 * e1 * normally_ordered_g2(out, d1a, d1b);
        h.areas[{DetectorPair::kD2D2, k}] = e2 * e2 * normally_ordered_g2(out, d2a, d2b);
    }
    for (int t = 1; t <= w - 1; ++t) {
        h.s1 += e1 * mean_photon_number(out, mzi.detector_modes(1, t));
        h.s2 += e2 * mean_photon_number(out, mzi.detector_modes(2, t));
    }
    h.s1 /= (w - 1);
    h.s2 /= (w - 1);
    return h;
}

// Normally ordered moments <a^dag_c... a_d...> of one pulse on its two local
// modes (shared, unique), at most two operators of each kind.
class PulseMoments {
   public:
    explicit PulseMoments(const MixedState& pulse) : pulse_(pulse) {}

    Amplitude get(std::vector<int> cre, std::vector<int> ann) {
        std::sort(cre.begin(), cre.end());
        std::sort(ann.begin(), ann.end());
        auto key = std::make_pair(cre, ann);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        Amplitude sum = 0;
        for (const auto& c : pulse_.components()) {
            MultimodeFockState bra = c.state;
            for (int m : cre) {
                bra = lower_mode(bra, m);
            }
            MultimodeFockState ket = c.state;
            for (int m : ann) {
                ket = lower_mode(ket, m);
            }
            sum += c.weight * bra.inner(ket);
        }
        cache_.emplace(std::move(key), sum);
        return sum;
    }

   private:
    static MultimodeFockState lower_mode(const MultimodeFockState& s, int mode) {
        MultimodeFockState out(s.mode_count(), s.cutoff());
        for (const auto& [occ, amp] : s.terms()) {
            if (occ[mode] == 0) {
                continue;
            }
            Occupation o = occ;
            o[mode] -= 1;
            out.add(o, amp * std::sqrt(static_cast<double>(occ[mode])));
        }
        return out;
    }

    const MixedState& pulse_;
    std::map<std::pair<std::vector<int>, std::vector<int>>, Amplitude> cache_;
};

struct InputMode {
    std::size_t global;
    int pulse;
    int local;
};

// Second and fourth normally ordered moments of the W-pulse product input,
// indexed over the occupied input modes.
struct InputMoments {
    std::vector<InputMode> modes;
    std::vector<Amplitude> m2;  // <a^dag_i a_k>, index i * n + k
    std::vector<Amplitude> m4;  // <a^dag_i a^dag_j a_k a_l>, index ((i n + j) n + k) n + l

    Amplitude product(PulseMoments& pm, std::initializer_list<std::size_t> cre,
                      std::initializer_list<std::size_t> ann) const {
        std::map<int, std::pair<std::vector<int>, std::vector<int>>> by_pulse;
        for (std::size_t i : cre) {
            by_pulse[modes[i].pulse].first.push_back(modes[i].local);
        }
        for (std::size_t i : ann) {
            by_pulse[modes[i].pulse].second.push_back(modes[i].local);
        }
        Amplitude v = 1;
        for (auto& [pulse, ops] : by_pulse) {
            v *= pm.get(ops.first, ops.second);
            if (v == Amplitude(0)) {
                break;
            }
        }
        return v;
    }
};

InputMoments input_moments(const SourcePulseSpec& source, const MziNetwork& mzi, int window) {
    const bool distinguishable = source.m_overlap < 1;
    InputMoments im;
    for (int t = 0; t < window; ++t) {
        im.modes.push_back({mzi.input_mode(t, 0), t, static_cast<int>(kSharedMode)});
        if (distinguishable) {
            im.modes.push_back({mzi.input_mode(t, 1 + t % 2), t, static_cast<int>(kUniqueMode)});
        }
    }
    const MixedState pulse = source_state(source);
    PulseMoments pm(pulse);
    const std::size_t n = im.modes.size();
    im.m2.resize(n * n);
    im.m4.resize(n * n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            im.m2[i * n + k] = im.product(pm, {i}, {k});
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t l = 0; l < n; ++l) {
                    im.m4[((i * n + j) * n + k) * n + l] = im.product(pm, {i, j}, {k, l});
                }
            }
        }
    }
    return im;
}

// Output annihilator b_o = sum_i u(o, i) a_i restricted to the occupied inputs.
using Row = std::vector<std::pair<std::size_t, Amplitude>>;

// Propagates only the columns of the occupied inputs through the lowered
// network; much cheaper than compiling the full matrix.
std::vector<Row> output_rows(const InterferometerNetwork& net, const InputMoments& im) {
    const std::size_t dim = net.mode_count();
    const std::size_t n = im.modes.size();
    Eigen::MatrixXcd cols = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    for (std::size_t p = 0; p < n; ++p) {
        cols(static_cast<Eigen::Index>(im.modes[p].global), static_cast<Eigen::Index>(p)) = 1;
    }
    for (const ModeOp& op : lower(net)) {
        const auto a = static_cast<Eigen::Index>(op.a);
        const auto b = static_cast<Eigen::Index>(op.b);
        switch (op.kind) {
            case ModeOp::Kind::kTwoMode: {
                Eigen::MatrixXcd pair(2, cols.cols());
                pair.row(0) = cols.row(a);
                pair.row(1) = cols.row(b);
                pair = op.matrix * pair;
                cols.row(a) = pair.row(0);
                cols.row(b) = pair.row(1);
                break;
            }
            case ModeOp::Kind::kPhase:
                cols.row(a) *= std::polar(1.0, op.phase);
                break;
            case ModeOp::Kind::kPermutation: {
                Eigen::MatrixXcd moved(cols.rows(), cols.cols());
                for (std::size_t i = 0; i < op.perm.size(); ++i) {
                    moved.row(static_cast<Eigen::Index>(op.perm[i])) = cols.row(static_cast<Eigen::Index>(i));
                }
                cols = std::move(moved);
                break;
            }
        }
    }
    std::vector<Row> rows(dim);
    for (std::size_t o = 0; o < dim; ++o) {
        for (std::size_t p = 0; p < n; ++p) {
            const Amplitude c = cols(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(p));
            if (std::abs(c) > 1e-15) {
                rows[o].push_back({p, c});
            }
        }
    }
    return rows;
}

double group_g2(const std::vector<Row>& rows, const InputMoments& im, std::span<const std::size_t> ga,
                std::span<const std::size_t> gb) {
    const std::size_t n = im.modes.size();
    Amplitude sum = 0;
    for (std::size_t oa : ga) {
        for (std::size_t ob : gb) {
            for (const auto& [i, ui] : rows[oa]) {
                for (const auto& [j, uj] : rows[ob]) {
                    const Amplitude cij = std::conj(ui) * std::conj(uj);
                    for (const auto& [k, uk] : rows[ob]) {
                        for (const auto& [l, ul] : rows[oa]) {
                            sum += cij * uk * ul * im.m4[((i * n + j) * n + k) * n + l];
                        }
                    }
                }
            }
        }
    }
    return sum.real();
}

double group_mean(const std::vector<Row>& rows, const InputMoments& im, std::span<const std::size_t> g) {
    const std::size_t n = im.modes.size();
    Amplitude sum = 0;
    for (std::size_t o : g) {
        for (const auto& [i, ui] : rows[o]) {
            for (const auto& [k, uk] : rows[o]) {
                sum += std::conj(ui) * uk * im.m2[i * n + k];
            }
        }
    }
    return sum.real();
}

RawHistogram measure_moments(const InputMoments& im, const MziNetwork& mzi, const HomOptions& o) {
    const std::vector<Row> rows = output_rows(mzi.network, im);
    RawHistogram h;
    const int w = o.window;
    const int kmax = w - 2;
    const double e1 = o.eta1;
    const double e2 = o.eta2;
    for (int k = -kmax; k <= kmax; ++k) {
        const int t0 = k >= 0 ? 1 : w - 1;
        const int t1 = t0 + k;
        auto d1a = mzi.detector_modes(1, t0);
        auto d2a = mzi.detector_modes(2, t0);
        auto d1b = mzi.detector_modes(1, t1);
        auto d2b = mzi.detector_modes(2, t1);
        h.areas[{DetectorPair::kD1D2, k}] = e1 * e2 * group_g2(rows, im, d1a, d2b);
        h.areas[{DetectorPair::kD1D1, k}] = e1 * e1 * group_g2(rows, im, d1a, d1b);
        h.areas[{DetectorPair::kD2D2, k}] = e2 * e2 * group_g2(rows, im, d2a, d2b);
    }
    for (int t = 1; t <= w - 1; ++t) {
        h.s1 += e1 * group_mean(rows, im, mzi.detector_modes(1, t));
        h.s2 += e2 * group_mean(rows, im, mzi.detector_modes(2, t));
    }
    h.s1 /= (w - 1);
    h.s2 /= (w - 1);
    return h;
}

void check_options(const HomOptions& o) {
    if (o.quadrature_points < 64) {
        throw std::invalid_argument("HomOptions: phase averaging needs at least 64 quadrature points");
    }
    if (!(o.eta1 > 0 && o.eta1 <= 1 && o.eta2 > 0 && o.eta2 <= 1)) {
        throw std::invalid_argument("HomOptions: detector efficiencies must be in (0, 1]");
    }
}

CorrelationHistogram finish(const RawHistogram& raw, double rho, std::optional<double> phi) {
    CorrelationHistogram h;
    h.peak_areas = raw.areas;
    h.single_1 = raw.s1;
    h.single_2 = raw.s2;
    h.phi = phi;
    h.efficiency_ratio = rho;
    h.normalization = normalization_factor(h.area(DetectorPair::kD1D1, 2), h.area(DetectorPair::kD1D2, 2),
                                           h.area(DetectorPair::kD2D2, 2), rho);
    return h;
}

}  // namespace

CorrelationHistogram simulate_histogram(const SourcePulseSpec& source, std::optional<double> phi,
                                        bool perpendicular, const HomOptions& options) {
    source.validate();
    check_options(options);
    const int n = options.quadrature_points;
    std::vector<double> phases;
    if (phi.has_value()) {
        phases.push_back(*phi);
    } else {
        for (int j = 0; j < n; ++j) {
            phases.push_back(2 * std::numbers::pi * j / n);
        }
    }

    RawHistogram acc;
    auto accumulate = [&](const RawHistogram& raw) {
        const double f = 1.0 / static_cast<double>(phases.size());
        for (const auto& [key, v] : raw.areas) {
            acc.areas[key] += v * f;
        }
        acc.s1 += raw.s1 * f;
        acc.s2 += raw.s2 * f;
    };
    if (options.engine == HomEngine::kMoments) {
        const MziNetwork base = build_unbalanced_mzi(mzi_options(source, 0.0, perpendicular, options));
        const InputMoments im = input_moments(source, base, options.window);
        for (double p : phases) {
            accumulate(measure_moments(im, build_unbalanced_mzi(mzi_options(source, p, perpendicular, options)),
                                       options));
        }
    } else {
        const Prepared prepared = prepare(source, perpendicular, options);
        MziNetwork mzi;
        for (double p : phases) {
            MixedState out = output_at(prepared, p, mzi);
            accumulate(measure(out, mzi, options));
        }
    }

    double rho = options.eta1 / options.eta2;
    if (!phi.has_value()) {
        rho = acc.s2 > 0 ? acc.s1 / acc.s2 : 1.0;
    }
    return finish(acc, options.efficiency_ratio.value_or(rho), phi);
}

HomSummary compute_summary(const SourcePulseSpec& source, const HomOptions& options) {
    auto par = simulate_histogram(source, std::nullopt, false, options);
    auto perp = simulate_histogram(source, std::nullopt, true, options);
    HomSummary s;
    s.g2_k0_par = par.g2(DetectorPair::kD1D2, 0);
    s.g2_k0_perp = perp.g2(DetectorPair::kD1D2, 0);
    s.g2_k1 = par.g2_k1();
    s.g2_kfar = par.g2(DetectorPair::kD1D2, 2);
    s.v_hom = vhom(s.g2_k0_par, s.g2_k0_perp);
    s.m_est = s.v_hom;
    s.ratio = s.g2_k1 / s.g2_kfar;
    try {
        s.c1_est = c1_from_ratio(s.ratio);
    } catch (const std::domain_error&) {
        s.c1_est = std::numeric_limits<double>::quiet_NaN();
    }
    // Normalizing each configuration by its own phase-averaged far cross peak.
    const double naive_par = par.area(DetectorPair::kD1D2, 0) / par.area(DetectorPair::kD1D2, 2);
    const double naive_perp = perp.area(DetectorPair::kD1D2, 0) / perp.area(DetectorPair::kD1D2, 2);
    s.v_hom_naive = vhom(naive_par, naive_perp);
    s.delta_m = source.m_overlap - s.v_hom_naive;
    s.c1_true = c1_of(source_state(source));
    return s;
}

double k1_oscillation_amplitude(const SourcePulseSpec& source, const HomOptions& options) {
    check_options(options);
    const int n = options.quadrature_points;
    double proj = 0;
    for (int j = 0; j < n; ++j) {
        const double p = 2 * std::numbers::pi * j / n;
        proj += simulate_histogram(source, p, false, options).g2_k1() * std::cos(2 * p) / n;
    }
    return -4 * proj;
}

}  // namespace fockhom
