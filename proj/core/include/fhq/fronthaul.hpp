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

#ifndef FHQ_FRONTHAUL_HPP
#define FHQ_FRONTHAUL_HPP

#include "fhq/quantizer.hpp"

#include <span>
#include <vector>

namespace fhq
{
    /*!
     * The bank of per-AP quantizers on the fronthaul.
     *
     * All APs share one bit depth b and hence one normalized step Δ'_opt(2^b)
     * and one pair (α, γ). AP m scales its step to the per-component standard
     * deviation of its input, Δ_m = Δ' · σ_m/√2, where σ_m² is the total
     * complex variance the AP was sized for. Bit depth 0 means an unquantized
     * fronthaul: samples pass through unchanged and α = γ = 1.
     */
    class FronthaulQuantizer
    {
    public:
        static FronthaulQuantizer unquantized(std::size_t aps);

        /// One quantizer per entry of `design_variance` (σ_m², complex).
        static FronthaulQuantizer sized(int bits, std::span<const double> design_variance);

        bool bypass() const { return bits_ == 0; }
        int bits() const { return bits_; }
        std::size_t aps() const { return design_variance_.size(); }

        /// Common Bussgang factors of every AP (identity when bypassed).
        const BussgangFactors &factors() const { return factors_; }
        double alpha() const { return factors_.alpha; }
        double gamma() const { return factors_.gamma; }
        double normalized_step() const { return normalized_step_; }

        double design_variance(std::size_t ap) const { return design_variance_.at(ap); }
        const UniformQuantizer &quantizer(std::size_t ap) const { return quantizers_.at(ap); }

        /// Quantizes (or passes through) one complex sample of AP `ap`.
        cplx apply(std::size_t ap, cplx x) const
        {
            if (bypass())
                return x;
            return quantize_complex(x, quantizers_[ap]);
        }

    private:
        int bits_ = 0;
        double normalized_step_ = 0.0;
        BussgangFactors factors_;
        std::vector<double> design_variance_;
        std::vector<UniformQuantizer> quantizers_;
    };

    /// Bussgang factors used by the closed forms for bit depth b (b = 0: identity).
    BussgangFactors factors_for_bits(int bits);
}

#endif
