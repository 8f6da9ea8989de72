// Copyright 2026 The qecspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QECSPIN_RUNTIME_H
#define QECSPIN_RUNTIME_H

#include <cstdint>
#include <functional>
#include <random>

namespace qecspin {

/// Seed of stream (a, b) under a master seed. Streams never share state, so per-trial
/// work can be scheduled on any thread without changing results.
uint64_t stream_seed(uint64_t master, uint64_t a, uint64_t b = 0);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64 &rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware concurrency).
/// Callers write results into slot i, which keeps the output order fixed.
void parallel_for(size_t count, size_t threads, const std::function<void(size_t)> &body);

size_t default_threads();

}  // namespace qecspin

#endif
