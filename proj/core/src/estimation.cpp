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

#include "fhq/estimation.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace fhq
{
    namespace
    {
        void check_factors(double alpha, double gamma)
        {
            if (!(alpha > 0.0))
                throw std::invalid_argument("estimation: alpha must be positive");
            if (gamma - alpha * alpha < -1e-12 * std::max(1.0, gamma))
                throw std::invalid_argument("estimation: gamma < alpha^2");
        }

        // (γ - α²) Σ_k' β_mk' + γ σ_n²: the noise-plus-distortion power in r_mk.
        double impairment(std::span<const double> beta_row, double alpha, double gamma, double sigma_n2)
        {
            const double sum = std::accumulate(beta_row.begin(), beta_row.end(), 0.0);
            return std::max(gamma - alpha * alpha, 0.0) * sum + gamma * sigma_n2;
        }
    }

    PilotBook make_pilot_book(Eigen::Index users, Eigen::Index tau)
    {
        if (tau < 1)
            throw std::invalid_argument("make_pilot_book: tau must be >= 1");
        if (users < 0 || tau < users)
            throw std::invalid_argument("make_pilot_book: need tau >= K for orthonormal pilots");

        PilotBook book{tau, CMatrix(tau, users)};
        const double scale = 1.0 / std::sqrt(static_cast<double>(tau));
        for (Eigen::Index k = 0; k < users; ++k)
            for (Eigen::Index t = 0; t < tau; ++t)
            {
                const auto kt = (k * t) % tau;
                const double angle = -2.0 * std::numbers::pi * static_cast<double>(kt) / static_cast<double>(tau);
                book.phi(t, k) = std::polar(scale, angle);
            }
        return book;
    }

    PilotPhase simulate_pilot_phase(const ChannelMatrix &channel, const LargeScaleGains &gains, const PilotBook &pilots,
                                    const NoiseModel &noise, const FronthaulQuantizer &fronthaul, Rng &rng,
                                    double sizing_tolerance)
    {
        const Eigen::Index m_count = channel.aps();
        if (pilots.users() != channel.users())
            throw std::invalid_argument("simulate_pilot_phase: pilot book and channel disagree on K");
        if (gains.aps() != m_count || gains.users() != channel.users())
            throw std::invalid_argument("simulate_pilot_phase: gains and channel shapes differ");
        if (fronthaul.aps() != static_cast<std::size_t>(m_count))
            throw std::invalid_argument("simulate_pilot_phase: fronthaul sized for a different number of APs");

        const double sqrt_tau = std::sqrt(static_cast<double>(pilots.tau));
        PilotPhase out;
        out.y = sqrt_tau * channel.g * pilots.phi.transpose();

        for (Eigen::Index m = 0; m < m_count; ++m)
        {
            for (Eigen::Index t = 0; t < pilots.tau; ++t)
                out.y(m, t) = fronthaul.apply(static_cast<std::size_t>(m), out.y(m, t) + rng.complex_normal(noise.sigma_n2));

            if (!fronthaul.bypass())
            {
                const double actual = gains.beta.row(m).sum() + noise.sigma_n2;
                const double mismatch = std::abs(fronthaul.design_variance(static_cast<std::size_t>(m)) / actual - 1.0);
                out.sizing_mismatch = std::max(out.sizing_mismatch, mismatch);
            }
        }
        out.sizing_warning = out.sizing_mismatch > sizing_tolerance;
        return out;
    }

    cplx pilot_correlate(std::span<const cplx> y_m, std::span<const cplx> phi_k)
    {
        if (y_m.size() != phi_k.size())
            throw std::invalid_argument("pilot_correlate: length mismatch");
        cplx r{0.0, 0.0};
        for (std::size_t t = 0; t < y_m.size(); ++t)
            r += std::conj(phi_k[t]) * y_m[t];
        return r;
    }

    CMatrix pilot_correlations(const CMatrix &y, const PilotBook &pilots)
    {
        if (y.cols() != pilots.tau)
            throw std::invalid_argument("pilot_correlations: sample block length differs from tau");
        return y * pilots.phi.conjugate();
    }

    double lmmse_coefficient(double beta_mk, std::span<const double> beta_row, Eigen::Index tau, double alpha,
                             double gamma, double sigma_n2)
    {
        check_factors(alpha, gamma);
        if (tau < 1)
            throw std::invalid_argument("lmmse_coefficient: tau must be >= 1");
        const double t = static_cast<double>(tau);
        return beta_mk * std::sqrt(t) * alpha /
               (t * alpha * alpha * beta_mk + impairment(beta_row, alpha, gamma, sigma_n2));
    }

    EstimationMse estimation_mse(double beta_mk, std::span<const double> beta_row, Eigen::Index tau, double alpha,
                                 double gamma, double sigma_n2)
    {
        check_factors(alpha, gamma);
        if (tau < 1)
            throw std::invalid_argument("estimation_mse: tau must be >= 1");
        if (!(beta_mk > 0.0))
            throw std::invalid_argument("estimation_mse: beta_mk must be positive");
        const double imp = impairment(beta_row, alpha, gamma, sigma_n2);
        const double nmse = imp / (alpha * alpha * static_cast<double>(tau) * beta_mk + imp);
        return {beta_mk * nmse, nmse};
    }

    double estimation_mse_at(double c, double beta_mk, std::span<const double> beta_row, Eigen::Index tau,
                             double alpha, double gamma, double sigma_n2)
    {
        check_factors(alpha, gamma);
        const double bias = c * std::sqrt(static_cast<double>(tau)) * alpha - 1.0;
        return beta_mk * bias * bias + c * c * impairment(beta_row, alpha, gamma, sigma_n2);
    }

    CMatrix estimate_channel(const CMatrix &r, const RMatrix &c)
    {
        if (r.rows() != c.rows() || r.cols() != c.cols())
            throw std::invalid_argument("estimate_channel: shape mismatch");
        return r.array() * c.array().cast<cplx>();
    }

    ChannelEstimate lmmse_closed_form(const LargeScaleGains &gains, Eigen::Index tau, double alpha, double gamma,
                                      double sigma_n2)
    {
        const Eigen::Index m_count = gains.aps();
        const Eigen::Index k_count = gains.users();
        ChannelEstimate est;
        est.c.resize(m_count, k_count);
        est.mse.resize(m_count, k_count);
        est.nmse.resize(m_count, k_count);

        std::vector<double> row(static_cast<std::size_t>(k_count));
        for (Eigen::Index m = 0; m < m_count; ++m)
        {
            for (Eigen::Index k = 0; k < k_count; ++k)
                row[static_cast<std::size_t>(k)] = gains.beta(m, k);
            for (Eigen::Index k = 0; k < k_count; ++k)
            {
                const double b = gains.beta(m, k);
                est.c(m, k) = lmmse_coefficient(b, row, tau, alpha, gamma, sigma_n2);
                const EstimationMse e = estimation_mse(b, row, tau, alpha, gamma, sigma_n2);
                est.mse(m, k) = e.mse;
                est.nmse(m, k) = e.nmse;
            }
        }
        return est;
    }
}
