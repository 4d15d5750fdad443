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

#include "fhq/cdf.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fhq
{
    CdfSeries make_cdf(std::string label, int bits, std::vector<double> samples)
    {
        if (samples.empty())
            throw std::invalid_argument("make_cdf: empty sample set for '" + label + "'");
        if (std::any_of(samples.begin(), samples.end(), [](double v) { return std::isnan(v); }))
            throw std::invalid_argument("make_cdf: NaN sample in '" + label + "'");

        std::sort(samples.begin(), samples.end());
        CdfSeries s{std::move(label), bits, std::move(samples), {}};
        const double n = static_cast<double>(s.values.size());
        s.probs.resize(s.values.size());
        for (std::size_t i = 0; i < s.values.size(); ++i)
            s.probs[i] = static_cast<double>(i + 1) / n;
        return s;
    }

    double quantile(const CdfSeries &series, double p)
    {
        if (series.values.empty())
            throw std::invalid_argument("quantile: empty series");
        if (!(p > 0.0 && p <= 1.0))
            throw std::invalid_argument("quantile: p must be in (0, 1]");
        const auto n = series.values.size();
        auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        idx = std::clamp<std::size_t>(idx, 1, n);
        return series.values[idx - 1];
    }

    double cdf_at(const CdfSeries &series, double x)
    {
        const auto it = std::upper_bound(series.values.begin(), series.values.end(), x);
        return static_cast<double>(it - series.values.begin()) / static_cast<double>(series.values.size());
    }

    std::string cdf_file_name(const std::string &campaign, int bits)
    {
        return campaign + "_b" + std::to_string(bits) + ".csv";
    }

    std::vector<std::filesystem::path> write_cdf_csv(const std::vector<CdfSeries> &series,
                                                     const std::filesystem::path &dir, const std::string &campaign,
                                                     const SimulationConfig &config)
    {
        if (series.empty())
            throw std::invalid_argument("write_cdf_csv: no series to write");

        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw std::runtime_error("write_cdf_csv: cannot create directory '" + dir.string() + "': " + ec.message());

        std::vector<std::filesystem::path> written;
        char buf[64];
        for (const CdfSeries &s : series)
        {
            if (s.values.empty())
                throw std::invalid_argument("write_cdf_csv: series '" + s.label + "' is empty");
            const auto path = dir / cdf_file_name(campaign, s.bits);
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("write_cdf_csv: cannot open '" + path.string() + "' for writing");
            out << "value,cum_prob\n";
            for (std::size_t i = 0; i < s.values.size(); ++i)
            {
                std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", s.values[i], s.probs[i]);
                out << buf;
            }
            out.flush();
            if (!out)
                throw std::runtime_error("write_cdf_csv: write failed for '" + path.string() + "'");
            written.push_back(path);
        }

        nlohmann::ordered_json manifest;
        manifest["campaign"] = campaign;
        for (const auto &[key, value] : config.entries())
            manifest["config"][key] = value;
        for (const CdfSeries &s : series)
            manifest["series"].push_back({{"label", s.label},
                                          {"bits", s.bits},
                                          {"file", cdf_file_name(campaign, s.bits)},
                                          {"samples", s.values.size()}});

        const auto manifest_path = dir / (campaign + "_manifest.json");
        std::ofstream mout(manifest_path, std::ios::binary | std::ios::trunc);
        if (!mout)
            throw std::runtime_error("write_cdf_csv: cannot open '" + manifest_path.string() + "' for writing");
        mout << manifest.dump(2) << '\n';
        if (!mout)
            throw std::runtime_error("write_cdf_csv: write failed for '" + manifest_path.string() + "'");
        written.push_back(manifest_path);
        return written;
    }
}
