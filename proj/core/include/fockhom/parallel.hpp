// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_PARALLEL_HPP
#define FOCKHOM_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fockhom {

/// Name of the environment variable that caps the worker count.
inline constexpr const char* kWorkersEnv = "FOCKHOM_WORKERS";

/// FOCKHOM_WORKERS if set to a positive integer, else the hardware
/// concurrency (at least 1).
int worker_count();

/// Calls f(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; the first exception is rethrown after all workers
/// stop.
template <class F>
void parallel_for(std::size_t n, F&& f, int workers = worker_count()) {
    const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back(run);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

/// out[i] = f(i), evaluated with parallel_for.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f, int workers = worker_count()) {
    std::vector<T> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = f(i); }, workers);
    return out;
}

}  // namespace fockhom

#endif
