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

#include "fhq/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace fhq
{
    void PathLossModel::validate() const
    {
        if (!(d0 > 0.0) || !(d1 > d0))
            throw std::invalid_argument("path loss: require 0 < d0 < d1");
        if (!(gamma0 > 0.0) || !(gamma1 > 0.0))
            throw std::invalid_argument("path loss: exponents must be positive");
    }

    double NetworkGeometry::distance(std::size_t ap, std::size_t user) const
    {
        const Point2 &a = aps.at(ap);
        const Point2 &u = users.at(user);
        return std::hypot(a.x - u.x, a.y - u.y);
    }

    NoiseModel NoiseModel::from_edge_snr(const PathLossModel &model, double service_width, double snr_edge,
                                         double sigma_s2)
    {
        if (!(sigma_s2 > 0.0))
            throw std::invalid_argument("noise model: sigma_s2 must be positive");
        return {snr_edge, noise_variance(model, service_width, snr_edge), sigma_s2};
    }

    double path_loss(double d, const PathLossModel &model)
    {
        if (!(d >= 0.0))
            throw std::invalid_argument("path_loss: distance must be non-negative");
        if (d < model.d0)
            return 1.0;
        if (d < model.d1)
            return std::pow(d / model.d0, -model.gamma0);
        return std::pow(model.d1 / model.d0, -model.gamma0) * std::pow(d / model.d1, -model.gamma1);
    }

    double noise_variance(const PathLossModel &model, double service_width, double snr_edge)
    {
        if (!(snr_edge > 0.0))
            throw std::invalid_argument("noise_variance: edge SNR must be positive");
        if (!(service_width > 0.0))
            throw std::invalid_argument("noise_variance: service width must be positive");
        return path_loss(0.5 * service_width, model) / snr_edge;
    }

    NetworkGeometry draw_geometry(std::size_t aps, std::size_t users, double service_width, Rng &rng)
    {
        if (aps < 1 || users < 1)
            throw std::invalid_argument("draw_geometry: need at least one AP and one user");
        if (!(service_width > 0.0))
            throw std::invalid_argument("draw_geometry: service width must be positive");

        NetworkGeometry geo;
        geo.service_width = service_width;
        geo.aps.resize(aps);
        geo.users.resize(users);
        for (auto &p : geo.aps)
        {
            p.x = rng.uniform(0.0, service_width);
            p.y = rng.uniform(0.0, service_width);
        }
        for (auto &p : geo.users)
        {
            p.x = rng.uniform(0.0, service_width);
            p.y = rng.uniform(0.0, service_width);
        }
        return geo;
    }

    LargeScaleGains large_scale_gains(const NetworkGeometry &geo, const PathLossModel &model, double sigma_sh_db,
                                      Rng &rng)
    {
        if (!(sigma_sh_db >= 0.0))
            throw std::invalid_argument("large_scale_gains: shadowing std must be non-negative");
        model.validate();

        const auto m_count = static_cast<Eigen::Index>(geo.aps.size());
        const auto k_count = static_cast<Eigen::Index>(geo.users.size());
        LargeScaleGains gains{RMatrix(m_count, k_count)};
        for (Eigen::Index m = 0; m < m_count; ++m)
            for (Eigen::Index k = 0; k < k_count; ++k)
            {
                const double xi = sigma_sh_db * rng.normal();
                const double pl = path_loss(geo.distance(static_cast<std::size_t>(m), static_cast<std::size_t>(k)), model);
                gains.beta(m, k) = (sigma_sh_db == 0.0 ? 1.0 : db_to_linear(xi)) * pl;
            }
        return gains;
    }

    CMatrix draw_small_scale(Eigen::Index aps, Eigen::Index users, Rng &rng)
    {
        CMatrix h(aps, users);
        for (Eigen::Index m = 0; m < aps; ++m)
            for (Eigen::Index k = 0; k < users; ++k)
                h(m, k) = rng.complex_normal(1.0);
        return h;
    }

    ChannelMatrix make_channel(const LargeScaleGains &gains, CMatrix h)
    {
        if (h.rows() != gains.aps() || h.cols() != gains.users())
            throw std::invalid_argument("make_channel: shape mismatch between h and beta");
        ChannelMatrix ch;
        ch.g = h.array() * gains.beta.array().sqrt().cast<cplx>();
        ch.h = std::move(h);
        return ch;
    }

    ChannelMatrix draw_channel(const LargeScaleGains &gains, Rng &rng)
    {
        return make_channel(gains, draw_small_scale(gains.aps(), gains.users(), rng));
    }

    double received_variance(std::span<const double> beta_row, double sigma_s2, double sigma_n2)
    {
        double sum = 0.0;
        for (double b : beta_row)
            sum += b;
        return sigma_s2 * sum + sigma_n2;
    }

    std::vector<double> received_variances(const LargeScaleGains &gains, double sigma_s2, double sigma_n2)
    {
        std::vector<double> out(static_cast<std::size_t>(gains.aps()));
        for (Eigen::Index m = 0; m < gains.aps(); ++m)
            out[static_cast<std::size_t>(m)] = sigma_s2 * gains.beta.row(m).sum() + sigma_n2;
        return out;
    }
}
