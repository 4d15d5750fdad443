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

#ifndef FHQ_CDF_HPP
#define FHQ_CDF_HPP

#include "fhq/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fhq
{
    /// Empirical CDF: ascending values, probs[i] = (i + 1) / N.
    struct CdfSeries
    {
        std::string label;
        int bits = 0;
        std::vector<double> values;
        std::vector<double> probs;

        std::size_t size() const { return values.size(); }
    };

    /// Sorts `samples` and attaches i/N probabilities. Throws
    /// std::invalid_argument when empty or when a sample is NaN.
    CdfSeries make_cdf(std::string label, int bits, std::vector<double> samples);

    /// Smallest value v with F(v) >= p, p in (0, 1].
    double quantile(const CdfSeries &series, double p);
    inline double median(const CdfSeries &series) { return quantile(series, 0.5); }

    /// Fraction of samples <= x.
    double cdf_at(const CdfSeries &series, double x);

    /// File name used for a series, `{campaign}_b{bits}.csv`.
    std::string cdf_file_name(const std::string &campaign, int bits);

    /*!
     * Writes each series to `dir/{campaign}_b{bits}.csv` with header
     * `value,cum_prob` and 9 significant digits, plus
     * `dir/{campaign}_manifest.json` recording the configuration and seed.
     * Creates `dir` if needed. Throws std::runtime_error naming the file on
     * I/O failure and std::invalid_argument on an empty series list.
     */
    std::vector<std::filesystem::path> write_cdf_csv(const std::vector<CdfSeries> &series,
                                                     const std::filesystem::path &dir, const std::string &campaign,
                                                     const SimulationConfig &config);
}

#endif
