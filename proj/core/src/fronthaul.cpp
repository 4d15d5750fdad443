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

#include "fhq/fronthaul.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fhq
{
    BussgangFactors factors_for_bits(int bits)
    {
        if (bits == 0)
            return BussgangFactors::identity();
        if (bits < 1 || bits > 30)
            throw std::invalid_argument("bit depth must be 0 (unquantized) or in [1, 30], got " + std::to_string(bits));
        const long levels = 1L << bits;
        const double step = optimal_step(levels).normalized_step;
        // Unit-variance input: the factors only depend on the normalized step.
        return bussgang_factors(UniformQuantizer(levels, step), 1.0);
    }

    FronthaulQuantizer FronthaulQuantizer::unquantized(std::size_t aps)
    {
        FronthaulQuantizer fq;
        fq.design_variance_.assign(aps, 0.0);
        return fq;
    }

    FronthaulQuantizer FronthaulQuantizer::sized(int bits, std::span<const double> design_variance)
    {
        if (bits == 0)
        {
            FronthaulQuantizer fq = unquantized(design_variance.size());
            fq.design_variance_.assign(design_variance.begin(), design_variance.end());
            return fq;
        }

        FronthaulQuantizer fq;
        fq.bits_ = bits;
        fq.factors_ = factors_for_bits(bits);
        fq.normalized_step_ = optimal_step(1L << bits).normalized_step;
        fq.design_variance_.assign(design_variance.begin(), design_variance.end());
        fq.quantizers_.reserve(design_variance.size());
        for (double var : design_variance)
        {
            if (!(var > 0.0) || !std::isfinite(var))
                throw std::invalid_argument("FronthaulQuantizer: design variance must be positive and finite");
            const double sigma_component = std::sqrt(0.5 * var);
            fq.quantizers_.emplace_back(1L << bits, fq.normalized_step_ * sigma_component);
        }
        return fq;
    }
}
