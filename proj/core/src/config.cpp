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

#include "fhq/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fhq
{
    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r\n");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r\n");
            return s.substr(first, last - first + 1);
        }

        [[noreturn]] void bad_value(std::string_view key, std::string_view value)
        {
            throw std::invalid_argument("config: bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
        }

        double to_double(std::string_view key, std::string_view value)
        {
            value = trim(value);
            double out = 0.0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
            if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out))
                bad_value(key, value);
            return out;
        }

        template <typename Int>
        Int to_integer(std::string_view key, std::string_view value)
        {
            value = trim(value);
            Int out = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
            if (ec != std::errc() || ptr != value.data() + value.size())
                bad_value(key, value);
            return out;
        }

        bool to_bool(std::string_view key, std::string_view value)
        {
            value = trim(value);
            if (value == "1" || value == "true" || value == "yes" || value == "on")
                return true;
            if (value == "0" || value == "false" || value == "no" || value == "off")
                return false;
            bad_value(key, value);
        }

        std::string format_double(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return buf;
        }
    }

    std::vector<int> parse_int_list(std::string_view text)
    {
        std::vector<int> out;
        text = trim(text);
        if (text.empty())
            return out;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            const auto comma = text.find(',', pos);
            const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            out.push_back(to_integer<int>("list", item));
            if (comma == std::string_view::npos)
                break;
            pos = comma + 1;
        }
        return out;
    }

    std::vector<int> default_nmse_bits() { return {4, 6, 8, 10, 12, 14, 0}; }
    std::vector<int> default_sinr_bits() { return {6, 8, 10, 12, 14, 0}; }

    void SimulationConfig::set(std::string_view key, std::string_view value)
    {
        key = trim(key);
        if (key == "m_aps")
            m_aps = to_integer<std::size_t>(key, value);
        else if (key == "k_users")
            k_users = to_integer<std::size_t>(key, value);
        else if (key == "l_serv_m")
            l_serv_m = to_double(key, value);
        else if (key == "snr_edge_db")
            snr_edge_db = to_double(key, value);
        else if (key == "sigma_sh_db")
            sigma_sh_db = to_double(key, value);
        else if (key == "d0_m")
            path_loss.d0 = to_double(key, value);
        else if (key == "d1_m")
            path_loss.d1 = to_double(key, value);
        else if (key == "gamma0")
            path_loss.gamma0 = to_double(key, value);
        else if (key == "gamma1")
            path_loss.gamma1 = to_double(key, value);
        else if (key == "tau")
            tau = to_integer<std::size_t>(key, value);
        else if (key == "bits_list")
            bits_list = parse_int_list(value);
        else if (key == "n_geometries")
            n_geometries = to_integer<std::size_t>(key, value);
        else if (key == "n_smallscale")
            n_smallscale = to_integer<std::size_t>(key, value);
        else if (key == "seed")
            seed = to_integer<std::uint64_t>(key, value);
        else if (key == "sigma_s2")
            sigma_s2 = to_double(key, value);
        else if (key == "legacy_eq21")
            legacy_eq21 = to_bool(key, value);
        else if (key == "workers")
            workers = to_integer<std::size_t>(key, value);
        else
            throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
    }

    void SimulationConfig::validate() const
    {
        if (m_aps < 1)
            throw std::invalid_argument("config: m_aps must be >= 1");
        if (k_users < 1)
            throw std::invalid_argument("config: k_users must be >= 1");
        if (!(l_serv_m > 0.0))
            throw std::invalid_argument("config: l_serv_m must be positive");
        if (!(sigma_sh_db >= 0.0))
            throw std::invalid_argument("config: sigma_sh_db must be non-negative");
        path_loss.validate();
        if (tau != 0 && tau < k_users)
            throw std::invalid_argument("config: tau must be >= k_users for orthonormal pilots");
        for (int b : bits_list)
            if (b < 0 || b > 24)
                throw std::invalid_argument("config: bits_list entries must be in [0, 24]");
        if (n_geometries < 1)
            throw std::invalid_argument("config: n_geometries must be >= 1");
        if (n_smallscale < 1)
            throw std::invalid_argument("config: n_smallscale must be >= 1");
        if (!(sigma_s2 > 0.0))
            throw std::invalid_argument("config: sigma_s2 must be positive");
        if (workers < 1)
            throw std::invalid_argument("config: workers must be >= 1");
    }

    NoiseModel SimulationConfig::noise() const
    {
        return NoiseModel::from_edge_snr(path_loss, l_serv_m, db_to_linear(snr_edge_db), sigma_s2);
    }

    std::vector<std::pair<std::string, std::string>> SimulationConfig::entries() const
    {
        std::string bits;
        for (std::size_t i = 0; i < bits_list.size(); ++i)
            bits += (i ? "," : "") + std::to_string(bits_list[i]);
        return {
            {"m_aps", std::to_string(m_aps)},
            {"k_users", std::to_string(k_users)},
            {"l_serv_m", format_double(l_serv_m)},
            {"snr_edge_db", format_double(snr_edge_db)},
            {"sigma_sh_db", format_double(sigma_sh_db)},
            {"d0_m", format_double(path_loss.d0)},
            {"d1_m", format_double(path_loss.d1)},
            {"gamma0", format_double(path_loss.gamma0)},
            {"gamma1", format_double(path_loss.gamma1)},
            {"tau", std::to_string(pilot_length())},
            {"bits_list", bits},
            {"n_geometries", std::to_string(n_geometries)},
            {"n_smallscale", std::to_string(n_smallscale)},
            {"seed", std::to_string(seed)},
            {"sigma_s2", format_double(sigma_s2)},
            {"legacy_eq21", legacy_eq21 ? "true" : "false"},
        };
    }

    SimulationConfig load_config(const std::filesystem::path &path, SimulationConfig base)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("config: cannot open '" + path.string() + "'");

        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            std::string_view view(line);
            if (const auto hash = view.find('#'); hash != std::string_view::npos)
                view = view.substr(0, hash);
            view = trim(view);
            if (view.empty())
                continue;
            const auto eq = view.find('=');
            if (eq == std::string_view::npos)
                throw std::invalid_argument("config: " + path.string() + ":" + std::to_string(line_no) +
                                            ": expected key = value");
            try
            {
                base.set(view.substr(0, eq), view.substr(eq + 1));
            }
            catch (const std::invalid_argument &e)
            {
                throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
        return base;
    }
}
