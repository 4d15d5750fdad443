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

#ifndef FHQ_CHANNEL_HPP
#define FHQ_CHANNEL_HPP

#include "fhq/random.hpp"
#include "fhq/types.hpp"

#include <span>
#include <vector>

namespace fhq
{
    /// Three-slope path loss: flat below d0, exponent gamma0 on [d0, d1),
    /// exponent gamma1 beyond d1. Distances in meters, gains linear.
    struct PathLossModel
    {
        double d0 = 10.0;
        double d1 = 100.0;
        double gamma0 = 2.0;
        double gamma1 = 3.5;

        void validate() const;
    };

    struct Point2
    {
        double x = 0.0;
        double y = 0.0;
    };

    /// AP and user positions on the square [0, service_width]².
    struct NetworkGeometry
    {
        std::vector<Point2> aps;
        std::vector<Point2> users;
        double service_width = 0.0;

        double distance(std::size_t ap, std::size_t user) const;
    };

    /// M×K matrix of linear large-scale gains β_mk.
    struct LargeScaleGains
    {
        RMatrix beta;

        Eigen::Index aps() const { return beta.rows(); }
        Eigen::Index users() const { return beta.cols(); }
    };

    /// G = h ∘ √β with h i.i.d. CN(0, 1).
    struct ChannelMatrix
    {
        CMatrix g;
        CMatrix h;

        Eigen::Index aps() const { return g.rows(); }
        Eigen::Index users() const { return g.cols(); }
    };

    struct NoiseModel
    {
        double snr_edge = 100.0; ///< linear
        double sigma_n2 = 0.0;   ///< receiver noise variance
        double sigma_s2 = 1.0;   ///< user transmit power

        /// Noise anchored to the edge SNR of the given path-loss model.
        static NoiseModel from_edge_snr(const PathLossModel &model, double service_width, double snr_edge,
                                        double sigma_s2 = 1.0);
    };

    /// Linear path gain at distance d. Throws std::invalid_argument for d < 0.
    double path_loss(double d, const PathLossModel &model);

    /// σ_n² = PL(l_serv/2) / SNR_edge.
    double noise_variance(const PathLossModel &model, double service_width, double snr_edge);

    NetworkGeometry draw_geometry(std::size_t aps, std::size_t users, double service_width, Rng &rng);

    /// β_mk = 10^(ξ_mk/10) · PL(d_mk) with ξ_mk ~ N(0, sigma_sh_db²) i.i.d.
    LargeScaleGains large_scale_gains(const NetworkGeometry &geo, const PathLossModel &model, double sigma_sh_db,
                                      Rng &rng);

    /// M×K i.i.d. CN(0, 1) Rayleigh factors.
    CMatrix draw_small_scale(Eigen::Index aps, Eigen::Index users, Rng &rng);

    /// Combine Rayleigh factors with large-scale gains.
    ChannelMatrix make_channel(const LargeScaleGains &gains, CMatrix h);
    ChannelMatrix draw_channel(const LargeScaleGains &gains, Rng &rng);

    /// σ_m² = σ_s² Σ_k β_mk + σ_n², the per-AP quantizer sizing variance.
    double received_variance(std::span<const double> beta_row, double sigma_s2, double sigma_n2);

    /// received_variance for every AP (row) of `gains`.
    std::vector<double> received_variances(const LargeScaleGains &gains, double sigma_s2, double sigma_n2);
}

#endif
