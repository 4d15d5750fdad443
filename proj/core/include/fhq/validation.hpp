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

#ifndef FHQ_VALIDATION_HPP
#define FHQ_VALIDATION_HPP

#include "fhq/config.hpp"
#include "fhq/detection.hpp"

#include <string>
#include <vector>

namespace fhq
{
    /// Which variance the per-AP quantizers are sized from in the
    /// sample-level detection check.
    enum class DetectionSizing
    {
        large_scale,   ///< σ_s² Σ_k β_mk + σ_n², known from β alone
        instantaneous, ///< σ_s² Σ_k |g_mk|² + σ_n², the variance of x_m given G
    };

    struct ValidationOptions
    {
        std::size_t trials = 100000;
        std::size_t estimation_aps = 10;
        std::size_t detection_aps = 20;
        std::size_t users = 4;
        std::vector<int> estimation_bits{4, 8, 12};
        std::vector<int> detection_bits{6, 10, 14};
        double mse_tolerance_se = 3.0;
        double orthogonality_tolerance_se = 4.0;
        double algebraic_tolerance = 1e-12;
        DetectionSizing detection_sizing = DetectionSizing::instantaneous;
        std::size_t workers = 1;
    };

    struct ValidationCheck
    {
        std::string name;
        double empirical = 0.0;
        double predicted = 0.0;
        double std_error = 0.0; ///< 0 for algebraic checks
        double tolerance = 0.0; ///< allowed |empirical - predicted|
        bool passed = false;
    };

    struct ValidationReport
    {
        std::vector<ValidationCheck> checks;

        bool passed() const;
    };

    /// Sample-level pilot-phase NMSE versus the closed form at fixed β.
    struct EstimationTrialStats
    {
        double empirical_nmse = 0.0; ///< mean over trials of the (m, k)-averaged |ĝ - g|²/β
        double std_error = 0.0;
        double predicted_nmse = 0.0; ///< (m, k)-average of the closed-form nmse
        std::size_t trials = 0;
    };

    EstimationTrialStats run_estimation_trials(const LargeScaleGains &gains, const NoiseModel &noise, int bits,
                                               Eigen::Index tau, std::size_t trials, std::uint64_t seed,
                                               std::size_t workers = 1);

    /// Sample-level detection error versus C_e at a fixed channel.
    struct DetectionTrialStats
    {
        RVector empirical_error;   ///< per user mean |ŝ_k - s_k|²
        RVector error_std_error;
        RVector predicted_error;   ///< diag(C_e)
        CMatrix orthogonality;     ///< mean of (ŝ - s) y^H, K×M
        RMatrix orthogonality_z;   ///< max(|re|/se_re, |im|/se_im) per entry
        std::size_t trials = 0;
    };

    DetectionTrialStats run_detection_trials(const ChannelMatrix &channel, const LargeScaleGains &gains,
                                             const NoiseModel &noise, int bits, DetectionSizing sizing,
                                             std::size_t trials, std::uint64_t seed, std::size_t workers = 1);

    /*!
     * Checks the closed forms against direct sample-level simulation:
     * the unquantized estimator and detector against their textbook
     * forms (algebraic, tolerance `algebraic_tolerance`), the pilot-phase
     * NMSE at each estimation bit depth, and per-user detection error plus
     * the orthogonality residual at each detection bit depth. Geometry and
     * propagation settings come from `base`; AP and user counts from `options`.
     */
    ValidationReport validate_closed_forms(const SimulationConfig &base, const ValidationOptions &options);
}

#endif
