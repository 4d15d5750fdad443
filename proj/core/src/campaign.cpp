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

#include "parallel.hpp"

namespace fhq
{
    namespace
    {
        std::string series_label(int bits)
        {
            return bits == 0 ? std::string("unquantized") : std::to_string(bits) + " bits";
        }

        std::vector<BussgangFactors> factors_for(const std::vector<int> &bits)
        {
            std::vector<BussgangFactors> out;
            out.reserve(bits.size());
            for (int b : bits)
                out.push_back(factors_for_bits(b));
            return out;
        }
    }

    LargeScaleGains draw_large_scale(const SimulationConfig &config, std::size_t index)
    {
        Rng geo_rng = substream(config.seed, Stream::geometry, index);
        Rng shadow_rng = substream(config.seed, Stream::shadowing, index);
        const NetworkGeometry geo = draw_geometry(config.m_aps, config.k_users, config.l_serv_m, geo_rng);
        return large_scale_gains(geo, config.path_loss, config.sigma_sh_db, shadow_rng);
    }

    std::vector<CdfSeries> run_nmse_campaign(const SimulationConfig &config)
    {
        config.validate();
        const std::vector<int> bits = config.bits_list.empty() ? default_nmse_bits() : config.bits_list;
        const std::vector<BussgangFactors> factors = factors_for(bits);
        const NoiseModel noise = config.noise();
        const auto tau = static_cast<Eigen::Index>(config.pilot_length());

        // per_geometry[g][b] holds the M·K nmse values of geometry g at bit depth b.
        std::vector<std::vector<std::vector<double>>> per_geometry(config.n_geometries);
        detail::parallel_for(config.n_geometries, config.workers, [&](std::size_t g) {
            const LargeScaleGains gains = draw_large_scale(config, g);
            auto &slot = per_geometry[g];
            slot.resize(bits.size());
            for (std::size_t b = 0; b < bits.size(); ++b)
            {
                const ChannelEstimate est =
                    lmmse_closed_form(gains, tau, factors[b].alpha, factors[b].gamma, noise.sigma_n2);
                slot[b].assign(est.nmse.data(), est.nmse.data() + est.nmse.size());
            }
        });

        std::vector<CdfSeries> out;
        for (std::size_t b = 0; b < bits.size(); ++b)
        {
            std::vector<double> pooled;
            pooled.reserve(config.n_geometries * config.m_aps * config.k_users);
            for (const auto &slot : per_geometry)
                pooled.insert(pooled.end(), slot[b].begin(), slot[b].end());
            out.push_back(make_cdf(series_label(bits[b]), bits[b], std::move(pooled)));
        }
        return out;
    }

    std::vector<CdfSeries> run_sinr_campaign(const SimulationConfig &config)
    {
        config.validate();
        const std::vector<int> bits = config.bits_list.empty() ? default_sinr_bits() : config.bits_list;
        const std::vector<BussgangFactors> factors = factors_for(bits);
        const NoiseModel noise = config.noise();
        const NoiseScaling scaling = config.legacy_eq21 ? NoiseScaling::unscaled : NoiseScaling::bussgang;

        std::vector<std::vector<std::vector<double>>> per_geometry(config.n_geometries);
        detail::parallel_for(config.n_geometries, config.workers, [&](std::size_t g) {
            const LargeScaleGains gains = draw_large_scale(config, g);
            std::vector<ReceiverModel> models;
            for (const BussgangFactors &f : factors)
                models.push_back(receiver_model(gains, f, noise, scaling));

            auto &slot = per_geometry[g];
            slot.assign(bits.size(), {});
            for (std::size_t s = 0; s < config.n_smallscale; ++s)
            {
                Rng fading = substream(config.seed, Stream::fading, g * config.n_smallscale + s);
                const ChannelMatrix ch = draw_channel(gains, fading);
                for (std::size_t b = 0; b < bits.size(); ++b)
                {
                    const RVector sinr = per_user_sinr(error_covariance(ch.g, models[b]), noise.sigma_s2);
                    for (Eigen::Index k = 0; k < sinr.size(); ++k)
                        slot[b].push_back(linear_to_db(sinr(k)));
                }
            }
        });

        std::vector<CdfSeries> out;
        for (std::size_t b = 0; b < bits.size(); ++b)
        {
            std::vector<double> pooled;
            for (const auto &slot : per_geometry)
                pooled.insert(pooled.end(), slot[b].begin(), slot[b].end());
            out.push_back(make_cdf(series_label(bits[b]), bits[b], std::move(pooled)));
        }
        return out;
    }
}
