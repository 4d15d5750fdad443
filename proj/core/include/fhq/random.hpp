// SPDX-License-Identifier: Apache-2.0
//
// fhq - fronthaul quantization analysis for cell-free massive MIMO uplinks
// Copyright (C) 2026 The fhq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef FHQ_RANDOM_HPP
#define FHQ_RANDOM_HPP

#include "fhq/types.hpp"

#include <cstdint>
#include <random>

namespace fhq
{
    /// Named random substreams. Every draw in a campaign is taken from
    /// substream(seed, stream, index), so varying one component (say the
    /// noise) leaves every other component's samples untouched.
    enum class Stream : std::uint64_t
    {
        geometry = 1,
        shadowing = 2,
        fading = 3,
        noise = 4,
        symbols = 5,
        generic = 6,
    };

    /// Seeded random source: a 64-bit Mersenne twister plus a cached
    /// standard-normal distribution. Not thread-safe; give each worker its
    /// own instance.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

        double normal() { return normal_(engine_); }
        double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

        /// Circularly-symmetric complex normal with total variance `variance`.
        cplx complex_normal(double variance = 1.0)
        {
            const double s = std::sqrt(0.5 * variance);
            const double re = normal();
            const double im = normal();
            return {s * re, s * im};
        }

        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };

    // splitmix64 finalizer
    std::uint64_t mix64(std::uint64_t x);

    /// Independent generator for (seed, stream, index). Deterministic and
    /// independent of evaluation order, which keeps parallel runs bit-identical
    /// to serial ones.
    Rng substream(std::uint64_t seed, Stream stream, std::uint64_t index = 0);
}

#endif
