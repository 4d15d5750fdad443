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

#ifndef FHQ_CAMPAIGN_HPP
#define FHQ_CAMPAIGN_HPP

#include "fhq/cdf.hpp"
#include "fhq/config.hpp"

#include <vector>

namespace fhq
{
    /// β for geometry realization `index`, from the geometry and shadowing
    /// substreams of config.seed.
    LargeScaleGains draw_large_scale(const SimulationConfig &config, std::size_t index);

    /*!
     * Channel-estimation NMSE campaign.
     *
     * For each of n_geometries geometry/shadowing draws and each bit depth,
     * evaluates the closed-form LMMSE NMSE of every (AP, user) pair, and pools
     * all M·K·n_geometries values into one CDF per bit depth. Bit depths come
     * from bits_list, or default_nmse_bits() when it is empty.
     */
    std::vector<CdfSeries> run_nmse_campaign(const SimulationConfig &config);

    /*!
     * Per-user SINR campaign with perfect CSI.
     *
     * For each geometry and each of n_smallscale Rayleigh draws, computes the
     * MMSE error covariance and the SINR σ_s²/[C_e]_kk - 1 of every user. All
     * bit depths share the same channel draws. One CDF (values in dB) per bit
     * depth, each with K·n_geometries·n_smallscale samples.
     */
    std::vector<CdfSeries> run_sinr_campaign(const SimulationConfig &config);
}

#endif
