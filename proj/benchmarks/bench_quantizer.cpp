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

#include "fhq/fronthaul.hpp"
#include "fhq/quantizer.hpp"
#include "fhq/random.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace
{
    void quantize_scalar(benchmark::State &state)
    {
        const fhq::UniformQuantizer q(state.range(0), fhq::optimal_step(state.range(0)).normalized_step);
        std::mt19937_64 eng(1);
        std::normal_distribution<double> n;
        std::vector<double> x(4096);
        for (double &v : x)
            v = n(eng);
        for (auto _ : state)
            for (double v : x)
                benchmark::DoNotOptimize(q.apply(v));
        state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
    }
    BENCHMARK(quantize_scalar)->Arg(4)->Arg(256)->Arg(16384);

    void step_objective_sweep(benchmark::State &state)
    {
        long levels = 2;
        for (auto _ : state)
        {
            benchmark::DoNotOptimize(fhq::step_objective(levels, 0.5));
            levels = levels >= 1 << 14 ? 2 : levels * 2;
        }
    }
    BENCHMARK(step_objective_sweep);

    void bussgang_closed_form(benchmark::State &state)
    {
        for (auto _ : state)
        {
            benchmark::DoNotOptimize(fhq::bussgang_alpha_normalized(state.range(0), 0.05));
            benchmark::DoNotOptimize(fhq::power_gain_gamma_normalized(state.range(0), 0.05));
        }
    }
    BENCHMARK(bussgang_closed_form)->Arg(16)->Arg(1024)->Arg(16384);
}

BENCHMARK_MAIN();
