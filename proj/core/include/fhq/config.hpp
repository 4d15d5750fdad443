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

#ifndef FHQ_CONFIG_HPP
#define FHQ_CONFIG_HPP

#include "fhq/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fhq
{
    /*!
     * Campaign configuration. Defaults are the reference scenario: 200 APs,
     * 40 users on a 1 km square, 20 dB edge SNR, 8 dB shadowing, τ = K.
     *
     * Text form is flat `key = value` lines; `#` starts a comment. Keys are
     * the field names below, plus d0_m, d1_m, gamma0, gamma1 for the path
     * loss model. bits_list is a comma-separated list where 0 means an
     * unquantized fronthaul; left empty, each campaign picks its own default.
     */
    struct SimulationConfig
    {
        std::size_t m_aps = 200;
        std::size_t k_users = 40;
        double l_serv_m = 1000.0;
        double snr_edge_db = 20.0;
        double sigma_sh_db = 8.0;
        PathLossModel path_loss;
        std::size_t tau = 0; ///< 0 selects τ = K
        std::vector<int> bits_list;
        std::size_t n_geometries = 50;
        std::size_t n_smallscale = 10;
        std::uint64_t seed = 1;
        double sigma_s2 = 1.0;
        bool legacy_eq21 = false; ///< detector uses σ_n² I instead of α² σ_n² I
        std::size_t workers = 1;

        /// Sets one field from its text form. Throws std::invalid_argument
        /// for unknown keys or malformed values.
        void set(std::string_view key, std::string_view value);

        /// Throws std::invalid_argument describing the first violated constraint.
        void validate() const;

        std::size_t pilot_length() const { return tau == 0 ? k_users : tau; }
        NoiseModel noise() const;

        /// Every key with its current value, in a stable order.
        std::vector<std::pair<std::string, std::string>> entries() const;
    };

    /// Reads `key = value` lines into a copy of `base`. Errors name the file and line.
    SimulationConfig load_config(const std::filesystem::path &path, SimulationConfig base = {});

    /// "4, 6,8" -> {4, 6, 8}.
    std::vector<int> parse_int_list(std::string_view text);

    std::vector<int> default_nmse_bits();
    std::vector<int> default_sinr_bits();
}

#endif
