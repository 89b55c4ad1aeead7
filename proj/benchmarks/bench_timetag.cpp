// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <numbers>

#include <benchmark/benchmark.h>

#include "fockhom/timetag_analyze.hpp"
#include "fockhom/timetag_generate.hpp"

namespace {

using namespace fockhom;

GeneratorOptions options(std::uint64_t n) {
    GeneratorOptions g;
    g.source.theta = 0.22 * std::numbers::pi;
    g.n_pulses = n;
    return g;
}

void BM_Generate(benchmark::State& state) {
    const auto g = options(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_stream(g));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
    const auto stream = generate_stream(options(static_cast<std::uint64_t>(state.range(0))));
    const AnalysisOptions a;
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_parameters(stream, nullptr, a));
    }
}
BENCHMARK(BM_Estimate)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
