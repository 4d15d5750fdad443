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

#include "fhq/validation.hpp"

#include "fhq/campaign.hpp"
#include "fhq/estimation.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace fhq
{
    namespace
    {
        constexpr std::size_t chunk_size = 1000;

        std::size_t chunk_count(std::size_t trials) { return (trials + chunk_size - 1) / chunk_size; }

        double std_error_of_mean(double sum, double sum_sq, double n)
        {
            const double mean = sum / n;
            const double var = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1.0);
            return std::sqrt(var / n);
        }

        std::string bits_tag(int bits) { return bits == 0 ? "unquantized" : "b=" + std::to_string(bits); }
    }

    bool ValidationReport::passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck &c) { return c.passed; });
    }

    EstimationTrialStats run_estimation_trials(const LargeScaleGains &gains, const NoiseModel &noise, int bits,
                                               Eigen::Index tau, std::size_t trials, std::uint64_t seed,
                                               std::size_t workers)
    {
        if (trials < 2)
            throw std::invalid_argument("run_estimation_trials: need at least two trials");

        const PilotBook pilots = make_pilot_book(gains.users(), tau);
        // Pilot symbols have unit power, so the AP sizes for Σβ + σ_n².
        const std::vector<double> variance = received_variances(gains, 1.0, noise.sigma_n2);
        const FronthaulQuantizer fronthaul = FronthaulQuantizer::sized(bits, variance);
        const ChannelEstimate closed =
            lmmse_closed_form(gains, tau, fronthaul.alpha(), fronthaul.gamma(), noise.sigma_n2);
        const double pairs = static_cast<double>(gains.beta.size());

        struct Sums
        {
            double sum = 0.0, sum_sq = 0.0;
        };
        std::vector<Sums> chunks(chunk_count(trials));
        detail::parallel_for(chunks.size(), workers, [&](std::size_t c) {
            Rng rng = substream(seed, Stream::generic, c);
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(trials, begin + chunk_size);
            Sums s;
            for (std::size_t t = begin; t < end; ++t)
            {
                const ChannelMatrix ch = draw_channel(gains, rng);
                const PilotPhase phase = simulate_pilot_phase(ch, gains, pilots, noise, fronthaul, rng);
                const CMatrix g_hat = estimate_channel(pilot_correlations(phase.y, pilots), closed.c);
                const double value = ((g_hat - ch.g).cwiseAbs2().array() / gains.beta.array()).sum() / pairs;
                s.sum += value;
                s.sum_sq += value * value;
            }
            chunks[c] = s;
        });

        Sums total;
        for (const Sums &s : chunks)
        {
            total.sum += s.sum;
            total.sum_sq += s.sum_sq;
        }
        const double n = static_cast<double>(trials);
        EstimationTrialStats out;
        out.trials = trials;
        out.empirical_nmse = total.sum / n;
        out.std_error = std_error_of_mean(total.sum, total.sum_sq, n);
        out.predicted_nmse = closed.nmse.mean();
        return out;
    }

    DetectionTrialStats run_detection_trials(const ChannelMatrix &channel, const LargeScaleGains &gains,
                                             const NoiseModel &noise, int bits, DetectionSizing sizing,
                                             std::size_t trials, std::uint64_t seed, std::size_t workers)
    {
        if (trials < 2)
            throw std::invalid_argument("run_detection_trials: need at least two trials");

        const Eigen::Index m_count = channel.aps();
        const Eigen::Index k_count = channel.users();

        std::vector<double> variance;
        if (sizing == DetectionSizing::large_scale)
            variance = received_variances(gains, noise.sigma_s2, noise.sigma_n2);
        else
        {
            variance.resize(static_cast<std::size_t>(m_count));
            for (Eigen::Index m = 0; m < m_count; ++m)
                variance[static_cast<std::size_t>(m)] =
                    noise.sigma_s2 * channel.g.row(m).cwiseAbs2().sum() + noise.sigma_n2;
        }
        const FronthaulQuantizer fronthaul = FronthaulQuantizer::sized(bits, variance);

        ReceiverModel model;
        model.alpha = fronthaul.alpha();
        model.sigma_s2 = noise.sigma_s2;
        model.sigma_n2 = noise.sigma_n2;
        model.c_delta = distortion_covariance(variance, fronthaul.alpha(), fronthaul.gamma());
        const CMatrix w = mmse_weights(channel.g, model);
        const CMatrix ce = error_covariance(channel.g, model);

        struct Sums
        {
            RVector err, err_sq;
            CMatrix orth;
            RMatrix orth_sq_re, orth_sq_im;
        };
        std::vector<Sums> chunks(chunk_count(trials));
        detail::parallel_for(chunks.size(), workers, [&](std::size_t c) {
            Rng rng = substream(seed, Stream::generic, c);
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(trials, begin + chunk_size);
            Sums s{RVector::Zero(k_count), RVector::Zero(k_count), CMatrix::Zero(k_count, m_count),
                   RMatrix::Zero(k_count, m_count), RMatrix::Zero(k_count, m_count)};
            for (std::size_t t = begin; t < end; ++t)
            {
                const CVector sym = draw_symbols(k_count, noise.sigma_s2, rng);
                const CVector y = simulate_uplink(channel, sym, noise, fronthaul, rng);
                const CVector e = detect(w, y) - sym;
                const RVector e2 = e.cwiseAbs2();
                s.err += e2;
                s.err_sq += e2.cwiseAbs2();
                const CMatrix outer = e * y.adjoint();
                s.orth += outer;
                s.orth_sq_re += outer.real().cwiseAbs2();
                s.orth_sq_im += outer.imag().cwiseAbs2();
            }
            chunks[c] = std::move(s);
        });

        Sums total{RVector::Zero(k_count), RVector::Zero(k_count), CMatrix::Zero(k_count, m_count),
                   RMatrix::Zero(k_count, m_count), RMatrix::Zero(k_count, m_count)};
        for (const Sums &s : chunks)
        {
            total.err += s.err;
            total.err_sq += s.err_sq;
            total.orth += s.orth;
            total.orth_sq_re += s.orth_sq_re;
            total.orth_sq_im += s.orth_sq_im;
        }

        const double n = static_cast<double>(trials);
        DetectionTrialStats out;
        out.trials = trials;
        out.empirical_error = total.err / n;
        out.error_std_error.resize(k_count);
        out.predicted_error = ce.diagonal().real();
        for (Eigen::Index k = 0; k < k_count; ++k)
            out.error_std_error(k) = std_error_of_mean(total.err(k), total.err_sq(k), n);
        out.orthogonality = total.orth / n;
        out.orthogonality_z.resize(k_count, m_count);
        for (Eigen::Index k = 0; k < k_count; ++k)
            for (Eigen::Index m = 0; m < m_count; ++m)
            {
                const double se_re = std_error_of_mean(total.orth(k, m).real(), total.orth_sq_re(k, m), n);
                const double se_im = std_error_of_mean(total.orth(k, m).imag(), total.orth_sq_im(k, m), n);
                out.orthogonality_z(k, m) = std::max(std::abs(out.orthogonality(k, m).real()) / se_re,
                                                     std::abs(out.orthogonality(k, m).imag()) / se_im);
            }
        return out;
    }

    ValidationReport validate_closed_forms(const SimulationConfig &base, const ValidationOptions &options)
    {
        ValidationReport report;

        SimulationConfig est_cfg = base;
        est_cfg.m_aps = options.estimation_aps;
        est_cfg.k_users = options.users;
        est_cfg.tau = 0;
        est_cfg.validate();
        SimulationConfig det_cfg = est_cfg;
        det_cfg.m_aps = options.detection_aps;

        const NoiseModel noise = base.noise();
        const LargeScaleGains est_gains = draw_large_scale(est_cfg, 0);
        const LargeScaleGains det_gains = draw_large_scale(det_cfg, 1);
        const auto tau = static_cast<Eigen::Index>(est_cfg.pilot_length());

        // Unquantized, noiseless pilot phase: r_mk must equal h_mk √(τ β_mk).
        {
            Rng rng = substream(base.seed, Stream::fading, 0);
            const ChannelMatrix ch = draw_channel(est_gains, rng);
            const PilotBook pilots = make_pilot_book(est_gains.users(), tau);
            NoiseModel silent = noise;
            silent.sigma_n2 = 0.0;
            const auto bypass = FronthaulQuantizer::unquantized(static_cast<std::size_t>(est_gains.aps()));
            const PilotPhase phase = simulate_pilot_phase(ch, est_gains, pilots, silent, bypass, rng);
            const CMatrix r = pilot_correlations(phase.y, pilots);
            const CMatrix expected = std::sqrt(static_cast<double>(tau)) * ch.g;
            const double err = (r - expected).cwiseAbs().maxCoeff() / expected.cwiseAbs().maxCoeff();
            report.checks.push_back({"estimation unquantized: pilot correlation equals h*sqrt(tau*beta)", err, 0.0,
                                     0.0, options.algebraic_tolerance, err <= options.algebraic_tolerance});
        }

        // Unquantized detector against the textbook MMSE error covariance.
        {
            Rng rng = substream(base.seed, Stream::fading, 1);
            const ChannelMatrix ch = draw_channel(det_gains, rng);
            const ReceiverModel model = receiver_model(det_gains, BussgangFactors::identity(), noise);
            const CMatrix ce = error_covariance(ch.g, model);

            // (I/σ_s² + G^H G/σ_n²)^(-1) through a pivoted LU of the K×K matrix.
            CMatrix info = ch.g.adjoint() * ch.g / noise.sigma_n2;
            info.diagonal().array() += 1.0 / noise.sigma_s2;
            const CMatrix textbook = info.fullPivLu().inverse();
            const double err = (ce - textbook).norm() / textbook.norm();
            report.checks.push_back({"detection unquantized: C_e equals textbook MMSE", err, 0.0, 0.0,
                                     options.algebraic_tolerance, err <= options.algebraic_tolerance});
        }

        for (int bits : options.estimation_bits)
        {
            const EstimationTrialStats st = run_estimation_trials(
                est_gains, noise, bits, tau, options.trials, mix64(base.seed ^ 0x5e57ULL) + static_cast<std::uint64_t>(bits),
                options.workers);
            const double tol = options.mse_tolerance_se * st.std_error;
            report.checks.push_back({"estimation " + bits_tag(bits) + ": pilot-phase NMSE vs closed form",
                                     st.empirical_nmse, st.predicted_nmse, st.std_error, tol,
                                     std::abs(st.empirical_nmse - st.predicted_nmse) <= tol});
        }

        {
            Rng rng = substream(base.seed, Stream::fading, 2);
            const ChannelMatrix ch = draw_channel(det_gains, rng);
            for (int bits : options.detection_bits)
            {
                const DetectionTrialStats st =
                    run_detection_trials(ch, det_gains, noise, bits, options.detection_sizing, options.trials,
                                         mix64(base.seed ^ 0xde7ULL) + static_cast<std::uint64_t>(bits), options.workers);
                for (Eigen::Index k = 0; k < st.empirical_error.size(); ++k)
                {
                    const double tol = options.mse_tolerance_se * st.error_std_error(k);
                    report.checks.push_back({"detection " + bits_tag(bits) + ": user " + std::to_string(k) +
                                                 " error power vs diag(C_e)",
                                             st.empirical_error(k), st.predicted_error(k), st.error_std_error(k), tol,
                                             std::abs(st.empirical_error(k) - st.predicted_error(k)) <= tol});
                }
                const double worst = st.orthogonality_z.maxCoeff();
                report.checks.push_back({"detection " + bits_tag(bits) + ": orthogonality residual E[(s_hat-s)y^H]",
                                         worst, 0.0, 1.0, options.orthogonality_tolerance_se,
                                         worst <= options.orthogonality_tolerance_se});
            }
        }
        return report;
    }
}
