// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "fockhom/errors.hpp"
#include "fockhom/hom.hpp"
#include "fockhom/source.hpp"
#include "fockhom/timetag_analyze.hpp"
#include "fockhom/timetag_generate.hpp"
#include "fockhom/timetag_io.hpp"

namespace {

using namespace fockhom;
constexpr double kPi = std::numbers::pi;

TimeTagStream sample_stream() {
    return {{1, 0}, {2, 0}, {2, 12300}, {1, 24600}, {1, 24600}, {2, 1ull << 40}};
}

TEST(TimeTagIo, CsvRoundTrip) {
    std::stringstream ss;
    write_csv(ss, sample_stream());
    EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), kTimeTagCsvHeader);
    EXPECT_EQ(read_csv(ss), sample_stream());
}

TEST(TimeTagIo, BinaryRoundTrip) {
    std::stringstream ss;
    write_binary(ss, sample_stream());
    EXPECT_EQ(ss.str().size(), sample_stream().size() * kBinaryRecordSize);
    // little-endian timestamp after the detector byte
    EXPECT_EQ(static_cast<unsigned char>(ss.str()[9]), 2);
    EXPECT_EQ(static_cast<unsigned char>(ss.str()[10]), 0);
    EXPECT_EQ(read_binary(ss), sample_stream());
}

TEST(TimeTagIo, FileRoundTripByExtension) {
    const auto dir = std::filesystem::temp_directory_path() / "fockhom_io_test";
    std::filesystem::create_directories(dir);
    EXPECT_EQ(format_for_path(dir / "a.csv"), TimeTagFormat::kCsv);
    EXPECT_EQ(format_for_path(dir / "a.bin"), TimeTagFormat::kBinary);
    for (const char* name : {"s.csv", "s.bin"}) {
        write_stream(dir / name, sample_stream());
        EXPECT_EQ(read_stream(dir / name), sample_stream());
    }
    std::filesystem::remove_all(dir);
    EXPECT_THROW(read_stream(dir / "missing.bin"), InputFormatError);
}

TEST(TimeTagIo, MalformedInputThrows) {
    for (const char* text : {"", "detector_id,timestamp_ps\n3,100\n", "detector_id,timestamp_ps\n1,200\n1,100\n",
                             "detector_id,timestamp_ps\n1,abc\n", "wrong,header\n1,0\n",
                             "detector_id,timestamp_ps\n1,-5\n", "detector_id,timestamp_ps\n1\n"}) {
        std::stringstream ss(text);
        EXPECT_THROW(read_csv(ss), InputFormatError) << text;
    }
    std::stringstream ok("detector_id,timestamp_ps\n");
    EXPECT_TRUE(read_csv(ok).empty());

    std::stringstream bin;
    write_binary(bin, sample_stream());
    std::string truncated = bin.str().substr(0, 13);
    std::stringstream t(truncated);
    EXPECT_THROW(read_binary(t), InputFormatError);
    std::string bad_id = bin.str();
    bad_id[0] = 7;
    std::stringstream b(bad_id);
    EXPECT_THROW(read_binary(b), InputFormatError);
    EXPECT_THROW(validate_stream({{1, 5}, {1, 4}}), InputFormatError);
}

TEST(TimeTagAnalyze, BinStreamChecksGrid) {
    auto c = bin_stream({{1, 0}, {1, 0}, {2, 24600}}, 12300);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.n1[0], 2);
    EXPECT_EQ(c.n2[2], 1);
    EXPECT_THROW(bin_stream({{1, 5}}, 12300), InputFormatError);
    EXPECT_EQ(bin_stream({}, 12300).size(), 0u);
}

TEST(SplitMix64, KnownSequence) {
    SplitMix64 r(0);
    EXPECT_EQ(r(), 0xe220a8397b1dcdafull);
    EXPECT_EQ(r(), 0x6e789e6aa1b965f4ull);
    EXPECT_EQ(r(), 0x06c45d188009454full);
    SplitMix64 u(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
}

TEST(Drift, SinusoidAndRandomWalk) {
    DriftModel d;
    d.period = 100;
    d.offset = 0.5;
    auto phi = drift_phases(d, 250);
    for (std::uint64_t t : {0u, 37u, 249u}) {
        EXPECT_NEAR(phi[t], 0.5 + 2 * kPi * t / 100.0, 1e-12);
    }
    d.period = 0;
    EXPECT_NEAR(drift_phases(d, 10)[5], 0.5 + kPi, 1e-12);

    DriftModel w;
    w.kind = DriftModel::Kind::kRandomWalk;
    w.step = 0.01;
    w.seed = 9;
    auto a = drift_phases(w, 1000);
    EXPECT_EQ(a, drift_phases(w, 1000));
    EXPECT_DOUBLE_EQ(a[0], 0.0);
    w.seed = 10;
    EXPECT_NE(a, drift_phases(w, 1000));
    w.step = -1;
    EXPECT_THROW(drift_phases(w, 10), std::invalid_argument);
}

TEST(Generator, SeedDeterminism) {
    GeneratorOptions o;
    o.source.theta = 0.5 * kPi;
    o.n_pulses = 20000;
    o.seed = 7;
    auto a = generate_stream(o);
    EXPECT_EQ(a, generate_stream(o));
    o.seed = 8;
    EXPECT_NE(a, generate_stream(o));
    EXPECT_NO_THROW(validate_stream(a));
}

GeneratorOptions fixed_phase(double theta, double phi, std::uint64_t n) {
    GeneratorOptions o;
    o.source.theta = theta;
    o.drift.kind = DriftModel::Kind::kRandomWalk;
    o.drift.step = 0;
    o.drift.offset = phi;
    o.n_pulses = n;
    o.seed = 3;
    return o;
}

// Empirical <:n_a(t) n_b(t + k):> per bin.
double empirical(const BinCounts& c, int a, int b, int k) {
    const auto& x = a == 1 ? c.n1 : c.n2;
    const auto& y = b == 1 ? c.n1 : c.n2;
    double s = 0;
    std::uint64_t n = 0;
    for (std::uint64_t t = 1; t + k + 1 < c.size(); ++t) {
        const double nx = x[t];
        const double ny = y[t + k];
        s += (a == b && k == 0) ? nx * (nx - 1) : nx * ny;
        ++n;
    }
    return s / static_cast<double>(n);
}

TEST(Generator, MatchesExactCorrelations) {
    const std::uint64_t n = 400'000;
    for (double phi : {0.0, 0.9}) {
        for (double m : {1.0, 0.8}) {
            auto o = fixed_phase(0.6 * kPi, phi, n);
            o.source.m_overlap = m;
            auto counts = generate_counts(o);
            auto h = simulate_histogram(o.source, phi, false);
            const double sigma = 1 / std::sqrt(static_cast<double>(n));
            EXPECT_NEAR(empirical(counts, 1, 1, 0) + 0, h.area(DetectorPair::kD1D1, 0), 4 * sigma);
            for (int k : {0, 1, 2}) {
                EXPECT_NEAR(empirical(counts, 1, 2, k), h.area(DetectorPair::kD1D2, k), 4 * sigma) << phi << " " << k;
                EXPECT_NEAR(empirical(counts, 2, 1, k), h.area(DetectorPair::kD1D2, -k), 4 * sigma) << phi << " " << k;
            }
            double s1 = 0;
            for (auto v : counts.n1) s1 += v;
            EXPECT_NEAR(s1 / counts.size(), h.single_1, 4 * sigma);
        }
    }
}

TEST(Generator, PerpendicularArmDoesNotInterfere) {
    auto o = fixed_phase(0.5 * kPi, 0.0, 200'000);
    o.perpendicular = true;
    auto counts = generate_counts(o);
    double s1 = 0, s2 = 0;
    for (std::uint64_t t = 0; t < counts.size(); ++t) {
        s1 += counts.n1[t];
        s2 += counts.n2[t];
    }
    EXPECT_NEAR(s1 / s2, 1.0, 0.02);
}

TEST(Generator, EfficiencyThinning) {
    auto o = fixed_phase(0.5 * kPi, 0.0, 300'000);
    auto full = generate_counts(o);
    o.eta1 = 0.5;
    o.eta2 = 0.25;
    auto thin = generate_counts(o);
    auto sum = [](const std::vector<std::uint8_t>& v) {
        double s = 0;
        for (auto x : v) s += x;
        return s;
    };
    EXPECT_NEAR(sum(thin.n1) / sum(full.n1), 0.5, 0.01);
    EXPECT_NEAR(sum(thin.n2) / sum(full.n2), 0.25, 0.01);
    o.eta1 = 0;
    EXPECT_THROW(generate_counts(o), std::invalid_argument);
}

TEST(Generator, StreamTimestampsFollowBins) {
    BinCounts c;
    c.n1 = {1, 0, 2};
    c.n2 = {0, 1, 0};
    auto s = counts_to_stream(c, 100);
    TimeTagStream expect{{1, 0}, {2, 100}, {1, 200}, {1, 200}};
    EXPECT_EQ(s, expect);
    auto back = bin_stream(s, 100);
    EXPECT_EQ(back.n1, c.n1);
    EXPECT_EQ(back.n2, c.n2);
}

TEST(Analysis, EmptyStreamIsAnError) {
    AnalysisOptions o;
    EXPECT_THROW(estimate_parameters({}, nullptr, o), EstimationError);
    EXPECT_THROW(estimate_ratio({}, o), EstimationError);
}

TEST(Analysis, ClosureRecoversParameters) {
    GeneratorOptions g;
    g.source.theta = 0.22 * kPi;
    g.n_pulses = 1'000'000;
    g.seed = 11;
    auto par = generate_stream(g);
    g.perpendicular = true;
    g.seed = 12;
    auto perp = generate_stream(g);

    AnalysisOptions a;
    auto est = estimate_parameters(par, &perp, a);
    const double c1 = coherence_metrics(g.source).c1;
    EXPECT_TRUE(est.c1.contains(c1, 3)) << est.c1.value << " +- " << est.c1.sigma << " vs " << c1;
    EXPECT_TRUE(est.ratio.contains(ratio_phase_averaged(c1), 3)) << est.ratio.value;
    ASSERT_TRUE(est.m.has_value());
    EXPECT_TRUE(est.m->contains(1.0, 3)) << est.m->value << " +- " << est.m->sigma;
    EXPECT_GT(est.c1.sigma, 0);
    EXPECT_LT(est.c1.sigma, 0.05);
    EXPECT_EQ(est.flagged_blocks, 0u);

    auto again = estimate_parameters(par, &perp, a);
    EXPECT_EQ(again.to_json().dump(), est.to_json().dump());
}

TEST(Analysis, KnownC1InfersBlockPhases) {
    GeneratorOptions g = fixed_phase(0.3 * kPi, 1.0, 200'000);
    auto s = generate_stream(g);
    AnalysisOptions a;
    a.c1 = coherence_metrics(g.source).c1;
    a.efficiency_ratio = 1;
    auto blocks = infer_phase_blocks(s, a);
    ASSERT_EQ(blocks.size(), 10u);
    for (const auto& b : blocks) {
        EXPECT_NEAR(b.phi_hat, 1.0, 0.15) << b.block;
    }
}

TEST(Options, JsonRoundTrip) {
    GeneratorOptions g;
    g.source.theta = 1.1;
    g.source.p2 = 0.02;
    g.drift.kind = DriftModel::Kind::kRandomWalk;
    g.drift.step = 0.003;
    g.eta2 = 0.7;
    g.seed = 99;
    nlohmann::json j = g;
    GeneratorOptions back = j.get<GeneratorOptions>();
    EXPECT_EQ(nlohmann::json(back).dump(), j.dump());

    AnalysisOptions a;
    a.c1 = 0.5;
    a.block_length = 1234;
    nlohmann::json ja = a;
    EXPECT_EQ(nlohmann::json(ja.get<AnalysisOptions>()).dump(), ja.dump());

    AnalysisOptions bad;
    bad.max_k = 1;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    EXPECT_THROW(drift_kind_from_string("brownian"), std::invalid_argument);
}

}  // namespace
