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

#ifndef FHQ_DETECTION_HPP
#define FHQ_DETECTION_HPP

#include "fhq/channel.hpp"
#include "fhq/fronthaul.hpp"
#include "fhq/random.hpp"

#include <span>
#include <stdexcept>

namespace fhq
{
    /// Thrown when the detector's M×M system cannot be factored.
    class SingularSystemError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Diagonal covariance of the per-AP quantization distortion.
    struct DistortionCovariance
    {
        RVector diag;

        bool is_zero() const { return diag.size() == 0 || (diag.array() == 0.0).all(); }
    };

    /// c_δ,m = (γ - α²)(σ_s² Σ_k β_mk + σ_n²).
    DistortionCovariance distortion_covariance(const LargeScaleGains &gains, double alpha, double gamma,
                                               double sigma_s2, double sigma_n2);

    /// c_δ,m = (γ - α²) σ_m² for explicitly given input variances σ_m².
    DistortionCovariance distortion_covariance(std::span<const double> input_variance, double alpha, double gamma);

    /// How the receiver noise enters the detector's covariance model.
    enum class NoiseScaling
    {
        bussgang, ///< α² σ_n² I, the covariance of α·n in y = αGs + αn + δ
        unscaled, ///< σ_n² I as printed in the compact detector formula
    };

    /// Second-order model of y = α G s + α n + δ seen by the detector.
    struct ReceiverModel
    {
        double alpha = 1.0;
        double sigma_s2 = 1.0;
        double sigma_n2 = 0.0;
        DistortionCovariance c_delta;
        NoiseScaling noise_scaling = NoiseScaling::bussgang;

        /// Diagonal of the noise-plus-distortion covariance assumed by the detector.
        RVector impairment(Eigen::Index aps) const;
        /// Diagonal of the actual noise-plus-distortion covariance, α²σ_n² + c_δ,m.
        RVector true_impairment(Eigen::Index aps) const;
    };

    /// Receiver model for a fronthaul: its α, Eq.-style C_δ from `gains`.
    ReceiverModel receiver_model(const LargeScaleGains &gains, const BussgangFactors &factors, const NoiseModel &noise,
                                 NoiseScaling scaling = NoiseScaling::bussgang);

    struct DetectionResult
    {
        CVector s_hat;
        CMatrix weights;   ///< K×M
        CMatrix error_cov; ///< K×K
        RVector sinr;      ///< linear
        double rcond = 0.0;
    };

    /// K i.i.d. CN(0, sigma_s2) symbols.
    CVector draw_symbols(Eigen::Index users, double sigma_s2, Rng &rng);

    /// y_m = fronthaul.apply(m, Σ_k g_mk s_k + n_m), n ~ CN(0, σ_n²).
    CVector simulate_uplink(const ChannelMatrix &channel, const CVector &symbols, const NoiseModel &noise,
                            const FronthaulQuantizer &fronthaul, Rng &rng);

    /*!
     * Linear MMSE detector W = α σ_s² G^H (α² σ_s² G G^H + D)^(-1), D the
     * detector's impairment diagonal. The system is solved with a Cholesky
     * factorization. Throws SingularSystemError if it is not positive definite
     * (only possible with zero noise and zero distortion).
     */
    CMatrix mmse_weights(const CMatrix &g, const ReceiverModel &model);

    /// Same, also reporting the reciprocal condition estimate of the system.
    CMatrix mmse_weights(const CMatrix &g, const ReceiverModel &model, double &rcond);

    /// ŝ = W y.
    CVector detect(const CMatrix &w, const CVector &y);

    /// σ_s² I - α² σ_s⁴ G^H A^(-1) G via the M×M system.
    CMatrix error_covariance_direct(const CMatrix &g, const ReceiverModel &model);

    /// (I/σ_s² + α² G^H D^(-1) G)^(-1) via a K×K system; needs D > 0.
    CMatrix error_covariance_information(const CMatrix &g, const ReceiverModel &model);

    /// Error covariance of an arbitrary linear detector W under the true
    /// statistics: σ_s²(αWG - I)(αWG - I)^H + W(α²σ_n² I + C_δ)W^H.
    CMatrix error_covariance_for_weights(const CMatrix &w, const CMatrix &g, const ReceiverModel &model);

    /*!
     * Error covariance C_e of the detector built from `model`. For the
     * Bussgang noise scaling this is the MMSE error, evaluated in information
     * form when every impairment entry is positive and through the M×M system
     * otherwise. For the unscaled variant the detector is suboptimal and the
     * general quadratic form is used.
     */
    CMatrix error_covariance(const CMatrix &g, const ReceiverModel &model);

    /// sinr_k = σ_s² / [C_e]_kk - 1.
    RVector per_user_sinr(const CMatrix &error_cov, double sigma_s2);

    /// Weights, estimate, error covariance and SINR in one pass.
    DetectionResult mmse_detect(const CMatrix &g, const CVector &y, const ReceiverModel &model);

    struct JensenBounds
    {
        RVector gram;       ///< 1 / Σ_m β_mk, lower bound on E[(G^H G)^(-1)]_kk
        RVector distortion; ///< 1 / Σ_m β_mk/c_δ,m, lower bound on E[(G^H C_δ^(-1) G)^(-1)]_kk
    };

    /// Per-user Jensen lower bounds. Requires every c_δ,m > 0.
    JensenBounds jensen_bound_diagonals(const LargeScaleGains &gains, const DistortionCovariance &c_delta);

    /// Monte Carlo estimates of E[(G^H G)^(-1)] and E[(G^H C_δ^(-1) G)^(-1)]
    /// over Rayleigh draws at fixed β, with standard errors.
    struct JensenMonteCarlo
    {
        std::size_t draws = 0;
        CMatrix gram_mean;
        RMatrix gram_se_re, gram_se_im;
        CMatrix distortion_mean;
        RMatrix distortion_se_re, distortion_se_im;
    };

    JensenMonteCarlo jensen_monte_carlo(const LargeScaleGains &gains, const DistortionCovariance &c_delta,
                                        std::size_t draws, Rng &rng);
}

#endif
