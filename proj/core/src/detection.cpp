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

#include "fhq/detection.hpp"

#include <cmath>
#include <limits>

namespace fhq
{
    namespace
    {
        CMatrix hermitian_part(const CMatrix &a) { return 0.5 * (a + a.adjoint()); }

        void check_shapes(const CMatrix &g, const ReceiverModel &model)
        {
            if (model.c_delta.diag.size() != 0 && model.c_delta.diag.size() != g.rows())
                throw std::invalid_argument("detector: C_delta size differs from the number of APs");
            if (!(model.sigma_s2 > 0.0))
                throw std::invalid_argument("detector: sigma_s2 must be positive");
            if (!(model.alpha > 0.0))
                throw std::invalid_argument("detector: alpha must be positive");
        }

        // Cholesky factor of A = α² σ_s² G G^H + D.
        Eigen::LLT<CMatrix> factor_system(const CMatrix &g, const ReceiverModel &model, double &rcond)
        {
            check_shapes(g, model);
            const double a2s = model.alpha * model.alpha * model.sigma_s2;
            CMatrix a = a2s * (g * g.adjoint());
            a.diagonal() += model.impairment(g.rows()).cast<cplx>();

            Eigen::LLT<CMatrix> llt(a);
            rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
            if (llt.info() != Eigen::Success || !(rcond > std::numeric_limits<double>::epsilon()))
                throw SingularSystemError("detector: covariance of y is numerically singular "
                                          "(zero noise and zero distortion?)");
            return llt;
        }
    }

    DistortionCovariance distortion_covariance(const LargeScaleGains &gains, double alpha, double gamma,
                                               double sigma_s2, double sigma_n2)
    {
        const std::vector<double> var = received_variances(gains, sigma_s2, sigma_n2);
        return distortion_covariance(var, alpha, gamma);
    }

    DistortionCovariance distortion_covariance(std::span<const double> input_variance, double alpha, double gamma)
    {
        const double diff = gamma - alpha * alpha;
        if (diff < -1e-12 * std::max(1.0, gamma))
            throw std::invalid_argument("distortion_covariance: gamma < alpha^2");
        DistortionCovariance c{RVector(static_cast<Eigen::Index>(input_variance.size()))};
        for (std::size_t m = 0; m < input_variance.size(); ++m)
            c.diag(static_cast<Eigen::Index>(m)) = std::max(diff, 0.0) * input_variance[m];
        return c;
    }

    RVector ReceiverModel::impairment(Eigen::Index aps) const
    {
        const double noise = noise_scaling == NoiseScaling::bussgang ? alpha * alpha * sigma_n2 : sigma_n2;
        RVector d = RVector::Constant(aps, noise);
        if (c_delta.diag.size() != 0)
            d += c_delta.diag;
        return d;
    }

    RVector ReceiverModel::true_impairment(Eigen::Index aps) const
    {
        RVector d = RVector::Constant(aps, alpha * alpha * sigma_n2);
        if (c_delta.diag.size() != 0)
            d += c_delta.diag;
        return d;
    }

    ReceiverModel receiver_model(const LargeScaleGains &gains, const BussgangFactors &factors, const NoiseModel &noise,
                                 NoiseScaling scaling)
    {
        ReceiverModel model;
        model.alpha = factors.alpha;
        model.sigma_s2 = noise.sigma_s2;
        model.sigma_n2 = noise.sigma_n2;
        model.c_delta = distortion_covariance(gains, factors.alpha, factors.gamma, noise.sigma_s2, noise.sigma_n2);
        model.noise_scaling = scaling;
        return model;
    }

    CVector draw_symbols(Eigen::Index users, double sigma_s2, Rng &rng)
    {
        CVector s(users);
        for (Eigen::Index k = 0; k < users; ++k)
            s(k) = rng.complex_normal(sigma_s2);
        return s;
    }

    CVector simulate_uplink(const ChannelMatrix &channel, const CVector &symbols, const NoiseModel &noise,
                            const FronthaulQuantizer &fronthaul, Rng &rng)
    {
        if (symbols.size() != channel.users())
            throw std::invalid_argument("simulate_uplink: symbol vector length differs from K");
        if (fronthaul.aps() != static_cast<std::size_t>(channel.aps()))
            throw std::invalid_argument("simulate_uplink: fronthaul sized for a different number of APs");

        CVector y = channel.g * symbols;
        for (Eigen::Index m = 0; m < y.size(); ++m)
            y(m) = fronthaul.apply(static_cast<std::size_t>(m), y(m) + rng.complex_normal(noise.sigma_n2));
        return y;
    }

    CMatrix mmse_weights(const CMatrix &g, const ReceiverModel &model, double &rcond)
    {
        const Eigen::LLT<CMatrix> llt = factor_system(g, model, rcond);
        // A is Hermitian, so W = (A^(-1) α σ_s² G)^H.
        const CMatrix rhs = (model.alpha * model.sigma_s2) * g;
        return llt.solve(rhs).adjoint();
    }

    CMatrix mmse_weights(const CMatrix &g, const ReceiverModel &model)
    {
        double rcond = 0.0;
        return mmse_weights(g, model, rcond);
    }

    CVector detect(const CMatrix &w, const CVector &y)
    {
        if (w.cols() != y.size())
            throw std::invalid_argument("detect: weight matrix and observation disagree on M");
        return w * y;
    }

    CMatrix error_covariance_direct(const CMatrix &g, const ReceiverModel &model)
    {
        double rcond = 0.0;
        const Eigen::LLT<CMatrix> llt = factor_system(g, model, rcond);
        const double scale = model.alpha * model.sigma_s2;
        const CMatrix b = scale * g;
        CMatrix ce = -(b.adjoint() * llt.solve(b));
        ce.diagonal().array() += model.sigma_s2;
        return hermitian_part(ce);
    }

    CMatrix error_covariance_information(const CMatrix &g, const ReceiverModel &model)
    {
        check_shapes(g, model);
        const RVector d = model.impairment(g.rows());
        if (!(d.array() > 0.0).all())
            throw std::invalid_argument("error_covariance_information: impairment covariance must be positive definite");

        const CMatrix scaled = d.cwiseInverse().cwiseSqrt().asDiagonal() * g;
        CMatrix info = (model.alpha * model.alpha) * (scaled.adjoint() * scaled);
        info.diagonal().array() += 1.0 / model.sigma_s2;

        Eigen::LLT<CMatrix> llt(info);
        if (llt.info() != Eigen::Success)
            throw SingularSystemError("error_covariance_information: information matrix not positive definite");
        const CMatrix identity = CMatrix::Identity(g.cols(), g.cols());
        return hermitian_part(llt.solve(identity));
    }

    CMatrix error_covariance_for_weights(const CMatrix &w, const CMatrix &g, const ReceiverModel &model)
    {
        check_shapes(g, model);
        if (w.rows() != g.cols() || w.cols() != g.rows())
            throw std::invalid_argument("error_covariance_for_weights: W must be K×M");
        CMatrix bias = model.alpha * (w * g);
        bias.diagonal().array() -= 1.0;
        const RVector d = model.true_impairment(g.rows());
        const CMatrix ce = model.sigma_s2 * (bias * bias.adjoint()) + w * d.cast<cplx>().asDiagonal() * w.adjoint();
        return hermitian_part(ce);
    }

    CMatrix error_covariance(const CMatrix &g, const ReceiverModel &model)
    {
        if (model.noise_scaling == NoiseScaling::unscaled)
            return error_covariance_for_weights(mmse_weights(g, model), g, model);
        check_shapes(g, model);
        if ((model.impairment(g.rows()).array() > 0.0).all())
            return error_covariance_information(g, model);
        return error_covariance_direct(g, model);
    }

    RVector per_user_sinr(const CMatrix &error_cov, double sigma_s2)
    {
        RVector sinr(error_cov.rows());
        for (Eigen::Index k = 0; k < error_cov.rows(); ++k)
        {
            const double e = error_cov(k, k).real();
            if (!(e > 0.0))
                throw std::invalid_argument("per_user_sinr: error variance must be positive");
            sinr(k) = std::max(sigma_s2 / e - 1.0, 0.0);
        }
        return sinr;
    }

    DetectionResult mmse_detect(const CMatrix &g, const CVector &y, const ReceiverModel &model)
    {
        DetectionResult r;
        r.weights = mmse_weights(g, model, r.rcond);
        r.s_hat = detect(r.weights, y);
        r.error_cov = error_covariance(g, model);
        r.sinr = per_user_sinr(r.error_cov, model.sigma_s2);
        return r;
    }

    JensenBounds jensen_bound_diagonals(const LargeScaleGains &gains, const DistortionCovariance &c_delta)
    {
        if (c_delta.diag.size() != gains.aps())
            throw std::invalid_argument("jensen_bound_diagonals: C_delta size differs from M");
        if (!(c_delta.diag.array() > 0.0).all())
            throw std::invalid_argument("jensen_bound_diagonals: C_delta must be positive definite");

        JensenBounds b;
        b.gram = gains.beta.colwise().sum().transpose().cwiseInverse();
        b.distortion = (c_delta.diag.cwiseInverse().transpose() * gains.beta).transpose().cwiseInverse();
        return b;
    }

    JensenMonteCarlo jensen_monte_carlo(const LargeScaleGains &gains, const DistortionCovariance &c_delta,
                                        std::size_t draws, Rng &rng)
    {
        if (draws < 2)
            throw std::invalid_argument("jensen_monte_carlo: need at least two draws");
        if (c_delta.diag.size() != gains.aps() || !(c_delta.diag.array() > 0.0).all())
            throw std::invalid_argument("jensen_monte_carlo: C_delta must be positive definite and M long");

        const Eigen::Index k_count = gains.users();
        const CMatrix zero = CMatrix::Zero(k_count, k_count);
        const RMatrix rzero = RMatrix::Zero(k_count, k_count);
        CMatrix sum_g = zero, sum_d = zero;
        RMatrix sq_g_re = rzero, sq_g_im = rzero, sq_d_re = rzero, sq_d_im = rzero;
        const RVector w = c_delta.diag.cwiseInverse();
        const CMatrix identity = CMatrix::Identity(k_count, k_count);

        for (std::size_t i = 0; i < draws; ++i)
        {
            const ChannelMatrix ch = draw_channel(gains, rng);
            const CMatrix gram = ch.g.adjoint() * ch.g;
            const CMatrix weighted = ch.g.adjoint() * w.cast<cplx>().asDiagonal() * ch.g;
            const CMatrix inv_g = gram.llt().solve(identity);
            const CMatrix inv_d = weighted.llt().solve(identity);
            sum_g += inv_g;
            sum_d += inv_d;
            sq_g_re += inv_g.real().cwiseAbs2();
            sq_g_im += inv_g.imag().cwiseAbs2();
            sq_d_re += inv_d.real().cwiseAbs2();
            sq_d_im += inv_d.imag().cwiseAbs2();
        }

        const double n = static_cast<double>(draws);
        auto std_error = [n](const RMatrix &sum, const RMatrix &sq) {
            const RMatrix mean = sum / n;
            const RMatrix var = ((sq / n) - mean.cwiseAbs2()) * (n / (n - 1.0));
            return RMatrix((var.cwiseMax(0.0) / n).cwiseSqrt());
        };

        JensenMonteCarlo out;
        out.draws = draws;
        out.gram_mean = sum_g / n;
        out.distortion_mean = sum_d / n;
        out.gram_se_re = std_error(sum_g.real(), sq_g_re);
        out.gram_se_im = std_error(sum_g.imag(), sq_g_im);
        out.distortion_se_re = std_error(sum_d.real(), sq_d_re);
        out.distortion_se_im = std_error(sum_d.imag(), sq_d_im);
        return out;
    }
}
