// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace fockhom {

int worker_count() {
    if (const char* env = std::getenv(kWorkersEnv)) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace fockhom
