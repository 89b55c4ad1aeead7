// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <numbers>

#include <benchmark/benchmark.h>

#include "fockhom/hom.hpp"

namespace {

using namespace fockhom;

void BM_HistogramFixedPhase(benchmark::State& state) {
    SourcePulseSpec s;
    s.theta = 0.4 * std::numbers::pi;
    s.m_overlap = state.range(0) / 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_histogram(s, 0.7, false));
    }
}
BENCHMARK(BM_HistogramFixedPhase)->Arg(100)->Arg(90);

void BM_HistogramPhaseAveraged(benchmark::State& state) {
    SourcePulseSpec s;
    s.theta = 0.4 * std::numbers::pi;
    s.m_overlap = 0.9;
    HomOptions o;
    o.quadrature_points = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_histogram(s, std::nullopt, false, o));
    }
}
BENCHMARK(BM_HistogramPhaseAveraged)->Arg(64)->Arg(256);

void BM_FockStateEngine(benchmark::State& state) {
    SourcePulseSpec s;
    s.theta = 0.4 * std::numbers::pi;
    HomOptions o;
    o.engine = HomEngine::kFockState;
    o.window = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_histogram(s, 0.7, false, o));
    }
}
BENCHMARK(BM_FockStateEngine)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Summary(benchmark::State& state) {
    SourcePulseSpec s;
    s.theta = 0.4 * std::numbers::pi;
    s.m_overlap = 0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_summary(s));
    }
}
BENCHMARK(BM_Summary)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
