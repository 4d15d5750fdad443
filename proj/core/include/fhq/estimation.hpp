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

#ifndef FHQ_ESTIMATION_HPP
#define FHQ_ESTIMATION_HPP

#include "fhq/channel.hpp"
#include "fhq/fronthaul.hpp"
#include "fhq/random.hpp"

#include <span>

namespace fhq
{
    /// τ×K matrix whose columns are orthonormal constant-modulus pilots.
    struct PilotBook
    {
        Eigen::Index tau = 0;
        CMatrix phi;

        Eigen::Index users() const { return phi.cols(); }
    };

    /// Per-(m, k) LMMSE quantities. g_hat is empty when only the closed forms
    /// were evaluated.
    struct ChannelEstimate
    {
        CMatrix g_hat;
        RMatrix c;
        RMatrix mse;
        RMatrix nmse;
    };

    /*!
     * First K columns of the τ×τ unitary DFT, φ_k[t] = exp(-2πi·k·t/τ)/√τ.
     * Every entry has modulus 1/√τ, so each pilot symbol √τ·φ_k[t] has unit
     * power. Throws std::invalid_argument if tau < users or tau < 1.
     */
    PilotBook make_pilot_book(Eigen::Index users, Eigen::Index tau);

    struct PilotPhase
    {
        CMatrix y;                    ///< M×τ samples received at the CPU
        double sizing_mismatch = 0.0; ///< worst |design σ_m² / actual σ_m² - 1| over APs
        bool sizing_warning = false;  ///< sizing_mismatch above the tolerance
    };

    /*!
     * One pilot block: x_m[t] = √τ Σ_k g_mk φ_k[t] + n_m[t] with
     * n ~ CN(0, σ_n²), then y_m[t] = fronthaul.apply(m, x_m[t]).
     *
     * The per-symbol input variance at AP m is Σ_k β_mk + σ_n² (unit-power
     * pilot symbols). If the fronthaul was sized for a different variance by
     * more than `sizing_tolerance` (relative), the result is flagged.
     */
    PilotPhase simulate_pilot_phase(const ChannelMatrix &channel, const LargeScaleGains &gains, const PilotBook &pilots,
                                    const NoiseModel &noise, const FronthaulQuantizer &fronthaul, Rng &rng,
                                    double sizing_tolerance = 1e-6);

    /// r = φ^H y for one AP and one pilot.
    cplx pilot_correlate(std::span<const cplx> y_m, std::span<const cplx> phi_k);

    /// All correlations at once, R = Y · conj(Φ), M×K.
    CMatrix pilot_correlations(const CMatrix &y, const PilotBook &pilots);

    /// c_mk = β_mk √τ α / (τ α² β_mk + (γ - α²) Σ_k' β_mk' + γ σ_n²).
    double lmmse_coefficient(double beta_mk, std::span<const double> beta_row, Eigen::Index tau, double alpha,
                             double gamma, double sigma_n2);

    struct EstimationMse
    {
        double mse = 0.0;
        double nmse = 0.0;
    };

    /// Closed-form MSE at the optimal coefficient, and its ratio to β_mk.
    EstimationMse estimation_mse(double beta_mk, std::span<const double> beta_row, Eigen::Index tau, double alpha,
                                 double gamma, double sigma_n2);

    /*!
     * MSE of ĝ = c·r for an arbitrary coefficient c:
     *
     *   β (c√τ α - 1)² + c² ((γ - α²) Σ_k' β_mk' + γ σ_n²)
     *
     * Quadratic in c and minimized by lmmse_coefficient.
     */
    double estimation_mse_at(double c, double beta_mk, std::span<const double> beta_row, Eigen::Index tau,
                             double alpha, double gamma, double sigma_n2);

    /// ĝ = c ∘ r.
    CMatrix estimate_channel(const CMatrix &r, const RMatrix &c);

    /// c, mse and nmse for every (m, k) pair; g_hat is left empty.
    ChannelEstimate lmmse_closed_form(const LargeScaleGains &gains, Eigen::Index tau, double alpha, double gamma,
                                      double sigma_n2);
}

#endif
