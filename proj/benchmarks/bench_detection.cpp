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

#include "fhq/campaign.hpp"
#include "fhq/detection.hpp"
#include "fhq/estimation.hpp"
#include "fhq/fronthaul.hpp"

#include <benchmark/benchmark.h>

namespace
{
    fhq::SimulationConfig sized(std::int64_t aps, std::int64_t users)
    {
        fhq::SimulationConfig cfg;
        cfg.m_aps = static_cast<std::size_t>(aps);
        cfg.k_users = static_cast<std::size_t>(users);
        return cfg;
    }

    void error_covariance_information(benchmark::State &state)
    {
        const auto cfg = sized(state.range(0), state.range(1));
        const auto gains = fhq::draw_large_scale(cfg, 0);
        fhq::Rng rng = fhq::substream(cfg.seed, fhq::Stream::fading, 0);
        const auto ch = fhq::draw_channel(gains, rng);
        const auto model = fhq::receiver_model(gains, fhq::factors_for_bits(8), cfg.noise());
        for (auto _ : state)
            benchmark::DoNotOptimize(fhq::error_covariance_information(ch.g, model));
    }
    BENCHMARK(error_covariance_information)->Args({20, 4})->Args({200, 40});

    void error_covariance_direct(benchmark::State &state)
    {
        const auto cfg = sized(state.range(0), state.range(1));
        const auto gains = fhq::draw_large_scale(cfg, 0);
        fhq::Rng rng = fhq::substream(cfg.seed, fhq::Stream::fading, 0);
        const auto ch = fhq::draw_channel(gains, rng);
        const auto model = fhq::receiver_model(gains, fhq::factors_for_bits(8), cfg.noise());
        for (auto _ : state)
            benchmark::DoNotOptimize(fhq::error_covariance_direct(ch.g, model));
    }
    BENCHMARK(error_covariance_direct)->Args({20, 4})->Args({200, 40});

    void nmse_closed_form(benchmark::State &state)
    {
        const auto cfg = sized(200, 40);
        const auto gains = fhq::draw_large_scale(cfg, 0);
        const auto f = fhq::factors_for_bits(8);
        const auto noise = cfg.noise();
        for (auto _ : state)
            benchmark::DoNotOptimize(fhq::lmmse_closed_form(gains, 40, f.alpha, f.gamma, noise.sigma_n2));
    }
    BENCHMARK(nmse_closed_form);
}
