// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <numbers>

#include <benchmark/benchmark.h>

#include "fockhom/cnot_study.hpp"

namespace {

using namespace fockhom;

void BM_RunGate(benchmark::State& state) {
    const auto engine = state.range(0) == 0 ? GateEngine::kSubsets : GateEngine::kFockState;
    const auto in = uniform_inputs(0.6 * std::numbers::pi, {{0.1, 0.2, 0.3, 0.4}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_gate(in, InputKind::kCoherent, engine));
    }
}
BENCHMARK(BM_RunGate)->Arg(0)->Arg(1);

void BM_OptimizePhases(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_phases(0.6 * std::numbers::pi, Objective::kMaximize));
    }
}
BENCHMARK(BM_OptimizePhases)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
