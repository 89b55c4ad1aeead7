// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "fockhom/fock_ops.hpp"
#include "fockhom/fock_state.hpp"

namespace {

using namespace fockhom;

// n single photons in the first n of 2n modes through a random interferometer.
void BM_ApplyModeUnitary(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Occupation occ(2 * n, 0);
    for (std::size_t i = 0; i < n; ++i) occ[i] = 1;
    const auto in = MultimodeFockState::basis(occ, MultimodeFockState::kMaxCutoff);
    const auto u = random_unitary(2 * n, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_mode_unitary(in, u));
    }
}
BENCHMARK(BM_ApplyModeUnitary)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
