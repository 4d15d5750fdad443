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

#ifndef FHQ_QUANTIZER_HPP
#define FHQ_QUANTIZER_HPP

#include "fhq/types.hpp"

#include <limits>

namespace fhq
{
    /*!
     * L-level uniform midrise quantizer with step size Δ.
     *
     * Bins are half-open, (lΔ, (l+1)Δ], and map to (l + 1/2)Δ. The outermost
     * bins saturate, so the output alphabet is
     * { (l + 1/2)Δ : l = -L/2, ..., L/2 - 1 }. With this convention x = 0
     * falls into (-Δ, 0] and quantizes to -Δ/2; the lower saturation
     * threshold is x <= -(L/2 - 1)Δ, mirroring the upper one.
     */
    class UniformQuantizer
    {
    public:
        /// Throws std::invalid_argument unless levels is even and >= 2 and step > 0.
        UniformQuantizer(long levels, double step);

        /// L = 2^bits levels.
        static UniformQuantizer from_bits(int bits, double step);

        long levels() const { return levels_; }
        double step() const { return step_; }
        double bits() const { return std::log2(static_cast<double>(levels_)); }

        /// Largest output magnitude, (L-1)/2 · Δ.
        double max_output() const { return 0.5 * static_cast<double>(levels_ - 1) * step_; }

        /// Quantizes without the finiteness check; callers guarantee finite input.
        double apply(double x) const
        {
            double l = std::ceil(x / step_) - 1.0;
            const double half = 0.5 * static_cast<double>(levels_);
            if (l < -half)
                l = -half;
            else if (l > half - 1.0)
                l = half - 1.0;
            return (l + 0.5) * step_;
        }

    private:
        long levels_;
        double step_;
    };

    /// Quantizes one real sample. Throws std::invalid_argument for NaN or ±inf.
    double quantize(double x, const UniformQuantizer &q);

    /// Quantizes the in-phase and quadrature parts independently with q.
    cplx quantize_complex(cplx x, const UniformQuantizer &q);

    /// Gaussian tail function Q(x) = P(N(0,1) > x).
    double gaussian_q(double x);

    /*!
     * Bussgang linear gain α of the quantizer for a zero-mean Gaussian input
     * of standard deviation sigma_x:
     *
     *   α = Δ/(√(2π) σ_x) · (1 + 2 Σ_{l=1}^{L/2-1} exp(-l²Δ²/(2σ_x²)))
     *
     * Only the ratio Δ/σ_x matters.
     */
    double bussgang_alpha(const UniformQuantizer &q, double sigma_x);

    /*!
     * Power gain γ = E[g²(x)]/σ_x² for a zero-mean Gaussian input:
     *
     *   γ = (Δ/σ_x)² · (1/4 + 4 Σ_{l=1}^{L/2-1} l · Q(lΔ/σ_x))
     */
    double power_gain_gamma(const UniformQuantizer &q, double sigma_x);

    /// α and γ as functions of the normalized step Δ' = Δ/σ_x.
    double bussgang_alpha_normalized(long levels, double normalized_step);
    double power_gain_gamma_normalized(long levels, double normalized_step);

    /// σ_δ² = σ_x²(γ - α²). Throws std::invalid_argument if γ < α² beyond
    /// a relative round-off slack; tiny negative differences are clamped to 0.
    double distortion_power(double alpha, double gamma, double sigma_x2);

    /// α²/(γ - α²); +inf when γ == α².
    double sdnr(double alpha, double gamma);

    struct BussgangFactors
    {
        double alpha = 1.0;
        double gamma = 1.0;
        double distortion_power = 0.0;
        double sdnr = std::numeric_limits<double>::infinity();

        /// Distortion-free pass-through (α = γ = 1).
        static BussgangFactors identity() { return {}; }
    };

    /// All four factors for quantizer q driven by N(0, sigma_x²).
    BussgangFactors bussgang_factors(const UniformQuantizer &q, double sigma_x);

    /// The SDNR-maximization objective α²/γ at normalized step Δ'.
    double step_objective(long levels, double normalized_step);

    struct OptimalStep
    {
        double normalized_step = 0.0; ///< Δ' = Δ/σ_x
        double objective = 0.0;       ///< α²/γ at the optimum
        bool flat_objective = false;  ///< true for L = 2, where α²/γ = 2/π for every Δ'
    };

    /*!
     * Normalized step Δ' maximizing α²/γ (equivalently the SDNR).
     *
     * A log-spaced scan over [0.5/L, 8] with 1% spacing brackets the maximum,
     * which is then polished by golden-section search. For L = 2 the objective
     * is constant and the Lloyd-Max step 2·sqrt(2/π) (= 2E|x|) is returned.
     * Results are memoized per L; the function is thread-safe.
     *
     * Throws std::invalid_argument for odd L or L < 2.
     */
    OptimalStep optimal_step(long levels);
}

#endif
