// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fock_oracle.hpp"
#include "fockhom/hom.hpp"

namespace {

using namespace fockhom;
constexpr double kPi = std::numbers::pi;

SourcePulseSpec spec(double theta, double m = 1, std::optional<double> p2 = std::nullopt, double alpha = 0) {
    SourcePulseSpec s;
    s.theta = theta;
    s.m_overlap = m;
    s.p2 = p2;
    s.alpha = alpha;
    return s;
}

oracle::Pulse pulse(const SourcePulseSpec& s) {
    auto p = populations(s);
    return {p[0], p[1], p[2], s.alpha, s.m_overlap};
}

int index(DetectorPair p) { return p == DetectorPair::kD1D2 ? 0 : p == DetectorPair::kD1D1 ? 1 : 2; }
std::pair<int, int> detectors(DetectorPair p) {
    return p == DetectorPair::kD1D2 ? std::pair{1, 2} : p == DetectorPair::kD1D1 ? std::pair{1, 1} : std::pair{2, 2};
}

double oracle_norm(const oracle::MziMoments& m, double rho) {
    return 0.25 * (m.area(1, 1, 2) / rho + 2 * m.area(1, 2, 2) + rho * m.area(2, 2, 2));
}

struct OracleCase {
    double theta;
    double m;
    std::optional<double> p2;
    double phi;
    bool perpendicular;
    double eta1;
    double eta2;
};

class HistogramVsOracle : public ::testing::TestWithParam<OracleCase> {};

TEST_P(HistogramVsOracle, PeakAreasAndSingles) {
    const auto c = GetParam();
    const auto s = spec(c.theta, c.m, c.p2, 0.3);
    HomOptions o;
    o.eta1 = c.eta1;
    o.eta2 = c.eta2;
    const auto h = simulate_histogram(s, c.phi, c.perpendicular, o);
    const auto ref = oracle::mzi_moments(pulse(s), c.phi, c.perpendicular, o.window, c.eta1, c.eta2);
    EXPECT_EQ(h.max_k(), 3);
    for (const auto& [key, area] : h.peak_areas) {
        auto [a, b] = detectors(key.pair);
        EXPECT_NEAR(area, ref.area(a, b, key.k), 1e-12) << to_string(key.pair) << " k=" << key.k;
    }
    const double norm = oracle_norm(ref, c.eta1 / c.eta2);
    EXPECT_NEAR(h.normalization, norm, 1e-12);
    EXPECT_NEAR(h.g2(DetectorPair::kD1D2, 0), ref.area(1, 2, 0) / norm, 1e-10);
    double s1 = 0, s2 = 0;
    for (int t = 1; t < o.window; ++t) {
        s1 += ref.mean1[static_cast<std::size_t>(t)] / (o.window - 1);
        s2 += ref.mean2[static_cast<std::size_t>(t)] / (o.window - 1);
    }
    EXPECT_NEAR(h.single_1, s1, 1e-12);
    EXPECT_NEAR(h.single_2, s2, 1e-12);
    (void)index;
}

INSTANTIATE_TEST_SUITE_P(
    Grid, HistogramVsOracle,
    ::testing::Values(OracleCase{0.22 * kPi, 1, std::nullopt, 0.0, false, 1, 1},
                      OracleCase{0.5 * kPi, 1, std::nullopt, 0.7, false, 1, 1},
                      OracleCase{0.9 * kPi, 1, std::nullopt, 2.1, true, 1, 1},
                      OracleCase{0.4 * kPi, 0.8, std::nullopt, 0.5, false, 1, 1},
                      OracleCase{0.4 * kPi, 0.5, std::nullopt, 1.2, true, 1, 1},
                      OracleCase{0.7 * kPi, 1, 0.03, 0.9, false, 1, 1},
                      OracleCase{0.6 * kPi, 0.9, 0.02, 0.4, false, 0.7, 0.9},
                      OracleCase{kPi, 1, std::nullopt, 0.0, false, 0.8, 1}));

TEST(HomEngines, MomentAndFockStateAgree) {
    for (auto [theta, m, p2] : {std::tuple{0.3 * kPi, 1.0, std::optional<double>{}},
                                std::tuple{0.8 * kPi, 1.0, std::optional<double>{0.04}},
                                std::tuple{0.5 * kPi, 0.7, std::optional<double>{}}}) {
        HomOptions fast, slow;
        slow.engine = HomEngine::kFockState;
        for (bool perp : {false, true}) {
            auto a = simulate_histogram(spec(theta, m, p2), 0.8, perp, fast);
            auto b = simulate_histogram(spec(theta, m, p2), 0.8, perp, slow);
            for (const auto& [key, v] : a.peak_areas) {
                EXPECT_NEAR(v, b.area(key.pair, key.k), 1e-11);
            }
        }
    }
}

class AnalyticM1 : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(AnalyticM1, FarAndFirstPeaks) {
    const auto [theta_pi, phi] = GetParam();
    const double c1 = std::pow(std::cos(theta_pi * kPi / 2), 2);
    const auto h = simulate_histogram(spec(theta_pi * kPi), phi, false);
    EXPECT_NEAR(h.g2(DetectorPair::kD1D2, 2), 1 - std::pow(c1 * std::cos(phi), 2), 1e-9);
    EXPECT_NEAR(h.g2(DetectorPair::kD1D2, 3), 1 - std::pow(c1 * std::cos(phi), 2), 1e-9);
    EXPECT_NEAR(h.g2_k1(), 0.25 + 0.5 * (1 - c1 * std::cos(2 * phi)), 1e-9);
    EXPECT_NEAR(h.g2(DetectorPair::kD1D2, 0), 0.0, 1e-12);
    EXPECT_NEAR(g2_kfar_analytic(c1, phi), 1 - std::pow(c1 * std::cos(phi), 2), 1e-15);
    EXPECT_NEAR(g2_k1_analytic(c1, phi), 0.75 - 0.5 * c1 * std::cos(2 * phi), 1e-15);
}

INSTANTIATE_TEST_SUITE_P(Grid, AnalyticM1,
                         ::testing::Combine(::testing::Values(0.22, 0.5, 0.9, 1.0),
                                            ::testing::Values(0.0, kPi / 4, kPi / 2, 1.9, kPi)));

TEST(HomInvariants, ZeroDelayPeakIsPhaseIndependent) {
    for (double m : {1.0, 0.9, 0.6}) {
        double lo = 1e9, hi = -1e9;
        for (int j = 0; j < 16; ++j) {
            const double v = simulate_histogram(spec(0.22 * kPi, m), 2 * kPi * j / 16, false).g2(DetectorPair::kD1D2, 0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        EXPECT_LT(hi - lo, 1e-10) << "m=" << m;
    }
}

TEST(HomInvariants, VisibilityEqualsOverlap) {
    for (double theta : {0.22 * kPi, 0.6 * kPi, kPi}) {
        for (double m : {1.0, 0.93, 0.5, 0.0}) {
            EXPECT_NEAR(compute_summary(spec(theta, m)).v_hom, m, 1e-9) << theta << " " << m;
        }
    }
}

TEST(HomInvariants, PhaseAveragedRatioLaw) {
    for (int k = 1; k <= 10; ++k) {
        for (double m : {1.0, 0.8}) {
            auto s = spec(kPi * k / 10, m);
            auto sum = compute_summary(s);
            EXPECT_NEAR(sum.ratio, 3 / (4 - 2 * sum.c1_true * sum.c1_true), 1e-9);
            EXPECT_NEAR(sum.ratio, ratio_phase_averaged(sum.c1_true), 1e-9);
            EXPECT_NEAR(sum.g2_k1, 0.75, 1e-9);
        }
    }
    EXPECT_EQ(ratio_phase_averaged(0.0), 0.75);
    EXPECT_NEAR(compute_summary(spec(kPi)).ratio, 0.75, 1e-12);
}

TEST(HomInvariants, RatioInversion) {
    for (double c1 : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        EXPECT_NEAR(c1_from_ratio(ratio_phase_averaged(c1)), c1, 1e-12);
    }
    EXPECT_THROW(c1_from_ratio(0.7), std::domain_error);
    EXPECT_THROW(c1_from_ratio(1.6), std::domain_error);
}

TEST(HomInvariants, EfficiencySkewLeavesNormalizedPeaksUnchanged) {
    for (std::optional<double> phi : {std::optional<double>{0.6}, std::optional<double>{}}) {
        const auto s = spec(0.4 * kPi, 0.9);
        const auto ref = simulate_histogram(s, phi, false);
        for (auto [e1, e2] : {std::pair{0.8, 1.0}, std::pair{1.0, 1 / 1.2}, std::pair{0.5, 0.7}}) {
            HomOptions o;
            o.eta1 = e1;
            o.eta2 = e2;
            const auto h = simulate_histogram(s, phi, false, o);
            for (const auto& [key, v] : ref.peak_areas) {
                EXPECT_NEAR(h.g2(key.pair, key.k), ref.g2(key.pair, key.k), 1e-9);
            }
        }
    }
}

// Oracle-derived reference values at theta = 0.4 pi, frozen.
double oracle_delta_m(double theta, double m) {
    const auto p = pulse(spec(theta, m));
    double par0 = 0, par2 = 0, perp0 = 0, perp2 = 0;
    const int n = 8;  // second-order moments carry harmonics up to 2 phi
    for (int j = 0; j < n; ++j) {
        const double phi = 2 * kPi * j / n;
        auto a = oracle::mzi_moments(p, phi, false);
        auto b = oracle::mzi_moments(p, phi, true);
        par0 += a.area(1, 2, 0);
        par2 += a.area(1, 2, 2);
        perp0 += b.area(1, 2, 0);
        perp2 += b.area(1, 2, 2);
    }
    return m - (1 - (par0 / par2) / (perp0 / perp2));
}

TEST(DeltaM, MatchesOracleAndClosedForm) {
    const double theta = 0.4 * kPi;
    const double frozen_09 = 0.020991323928136;
    const double frozen_05 = 0.028288625853185;
    EXPECT_NEAR(oracle_delta_m(theta, 0.9), frozen_09, 1e-12);
    EXPECT_NEAR(oracle_delta_m(theta, 0.5), frozen_05, 1e-12);
    EXPECT_NEAR(compute_summary(spec(theta, 0.9)).delta_m, frozen_09, 1e-9);
    EXPECT_NEAR(compute_summary(spec(theta, 0.5)).delta_m, frozen_05, 1e-9);
    for (double m : {0.9, 0.5}) {
        auto s = spec(theta, m);
        EXPECT_NEAR(delta_m(coherence_metrics(s).c1, m), compute_summary(s).delta_m, 1e-9);
    }
}

TEST(DeltaM, VanishesWithoutDistinguishabilityOrCoherence) {
    for (double c1 : {0.0, 0.3, 1.0}) EXPECT_EQ(delta_m(c1, 1.0), 0.0);
    for (double m : {0.0, 0.5, 1.0}) EXPECT_EQ(delta_m(0.0, m), 0.0);
    EXPECT_THROW(delta_m(1.5, 0.5), std::invalid_argument);
}

TEST(K1Oscillation, AmplitudeIsC1TimesRootOverlap) {
    for (double m : {1.0, 0.81, 0.5}) {
        auto s = spec(0.3 * kPi, m);
        const double c1 = coherence_metrics(s).c1;
        EXPECT_NEAR(k1_oscillation_amplitude(s), c1 * std::sqrt(m), 1e-10);
        // Same projection on the oracle: g2_k1 is a trigonometric polynomial
        // of degree two in phi, so eight phases integrate it exactly.
        double proj = 0;
        for (int j = 0; j < 8; ++j) {
            const double phi = 2 * kPi * j / 8;
            auto r = oracle::mzi_moments(pulse(s), phi, false);
            const double g = 0.5 * (r.area(1, 2, 1) + r.area(1, 2, -1)) / oracle_norm(r, 1);
            proj += g * std::cos(2 * phi) / 8;
        }
        EXPECT_NEAR(-4 * proj, c1 * std::sqrt(m), 1e-10);
    }
}

TEST(Normalization, FactorFormula) {
    EXPECT_NEAR(normalization_factor(1, 1, 1), 1.0, 1e-15);
    EXPECT_NEAR(normalization_factor(0.64, 0.8, 1.0, 0.8), 0.8, 1e-15);
    EXPECT_THROW(normalization_factor(1, 1, 1, 0), std::invalid_argument);
    EXPECT_THROW(normalization_factor(0, 0, 0), std::domain_error);
}

TEST(HomOptionsValidation, Rejected) {
    HomOptions o;
    o.quadrature_points = 8;
    EXPECT_THROW(simulate_histogram(spec(1), std::nullopt, false, o), std::invalid_argument);
    HomOptions e;
    e.eta1 = 0;
    EXPECT_THROW(simulate_histogram(spec(1), 0.0, false, e), std::invalid_argument);
    EXPECT_THROW(simulate_histogram(spec(4), 0.0, false), std::invalid_argument);
}

}  // namespace
