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

#include "fhq/quantizer.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fhq
{
    namespace
    {
        void check_levels(long levels)
        {
            if (levels < 2 || levels % 2 != 0)
                throw std::invalid_argument("quantizer levels must be even and >= 2, got " + std::to_string(levels));
        }

        void check_sigma(double sigma_x)
        {
            if (!(sigma_x > 0.0) || !std::isfinite(sigma_x))
                throw std::invalid_argument("input standard deviation must be positive and finite");
        }
    }

    UniformQuantizer::UniformQuantizer(long levels, double step) : levels_(levels), step_(step)
    {
        check_levels(levels);
        if (!(step > 0.0) || !std::isfinite(step))
            throw std::invalid_argument("quantizer step must be positive and finite");
    }

    UniformQuantizer UniformQuantizer::from_bits(int bits, double step)
    {
        if (bits < 1 || bits > 30)
            throw std::invalid_argument("bits per component must be in [1, 30], got " + std::to_string(bits));
        return UniformQuantizer(1L << bits, step);
    }

    double quantize(double x, const UniformQuantizer &q)
    {
        if (!std::isfinite(x))
            throw std::invalid_argument("quantize: non-finite input sample");
        return q.apply(x);
    }

    cplx quantize_complex(cplx x, const UniformQuantizer &q)
    {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw std::invalid_argument("quantize_complex: non-finite input sample");
        return {q.apply(x.real()), q.apply(x.imag())};
    }

    double gaussian_q(double x)
    {
        return 0.5 * std::erfc(x / std::numbers::sqrt2);
    }

    // The sums below run to l = L/2 - 1. Loops stop once a term is exactly
    // zero in double precision: every later term is zero too, so the result
    // is bit-identical to the full sum.
    double bussgang_alpha_normalized(long levels, double normalized_step)
    {
        check_levels(levels);
        const double d2 = normalized_step * normalized_step;
        double sum = 0.0;
        for (long l = 1; l <= levels / 2 - 1; ++l)
        {
            const double lf = static_cast<double>(l);
            const double term = std::exp(-0.5 * lf * lf * d2);
            if (term == 0.0)
                break;
            sum += 2.0 * term;
        }
        return normalized_step / std::sqrt(2.0 * std::numbers::pi) * (sum + 1.0);
    }

    double power_gain_gamma_normalized(long levels, double normalized_step)
    {
        check_levels(levels);
        double sum = 0.0;
        for (long l = 1; l <= levels / 2 - 1; ++l)
        {
            const double lf = static_cast<double>(l);
            const double tail = gaussian_q(lf * normalized_step);
            if (tail == 0.0)
                break;
            sum += lf * tail;
        }
        return normalized_step * normalized_step * (0.25 + 4.0 * sum);
    }

    double bussgang_alpha(const UniformQuantizer &q, double sigma_x)
    {
        check_sigma(sigma_x);
        return bussgang_alpha_normalized(q.levels(), q.step() / sigma_x);
    }

    double power_gain_gamma(const UniformQuantizer &q, double sigma_x)
    {
        check_sigma(sigma_x);
        return power_gain_gamma_normalized(q.levels(), q.step() / sigma_x);
    }

    double distortion_power(double alpha, double gamma, double sigma_x2)
    {
        if (!(sigma_x2 > 0.0))
            throw std::invalid_argument("distortion_power: input variance must be positive");
        const double diff = gamma - alpha * alpha;
        if (diff < -1e-12 * std::max(1.0, gamma))
            throw std::invalid_argument("distortion_power: gamma < alpha^2, inconsistent Bussgang factors");
        return sigma_x2 * std::max(diff, 0.0);
    }

    double sdnr(double alpha, double gamma)
    {
        const double a2 = alpha * alpha;
        if (!(a2 > 0.0))
            throw std::invalid_argument("sdnr: alpha must be nonzero");
        const double diff = gamma - a2;
        if (diff < -1e-12 * std::max(1.0, gamma))
            throw std::invalid_argument("sdnr: gamma < alpha^2, inconsistent Bussgang factors");
        if (diff <= 0.0)
            return std::numeric_limits<double>::infinity();
        return a2 / diff;
    }

    BussgangFactors bussgang_factors(const UniformQuantizer &q, double sigma_x)
    {
        BussgangFactors f;
        f.alpha = bussgang_alpha(q, sigma_x);
        f.gamma = power_gain_gamma(q, sigma_x);
        f.distortion_power = distortion_power(f.alpha, f.gamma, sigma_x * sigma_x);
        f.sdnr = sdnr(f.alpha, f.gamma);
        return f;
    }

    double step_objective(long levels, double normalized_step)
    {
        if (!(normalized_step > 0.0))
            throw std::invalid_argument("step_objective: normalized step must be positive");
        const double a = bussgang_alpha_normalized(levels, normalized_step);
        const double g = power_gain_gamma_normalized(levels, normalized_step);
        return a * a / g;
    }

    namespace
    {
        OptimalStep solve_optimal_step(long levels)
        {
            if (levels == 2)
                return {2.0 * std::sqrt(2.0 / std::numbers::pi), 2.0 / std::numbers::pi, true};

            constexpr double upper = 8.0;
            constexpr double ratio = 1.01;
            const double lower = 0.5 / static_cast<double>(levels);

            // Coarse log-spaced scan; keep the best point and its neighbours.
            double prev = lower, best = lower, best_val = step_objective(levels, lower);
            double best_lo = lower, best_hi = lower * ratio;
            for (double d = lower * ratio; d <= upper * ratio; d *= ratio)
            {
                const double x = std::min(d, upper);
                const double v = step_objective(levels, x);
                if (v > best_val)
                {
                    best_val = v;
                    best = x;
                    best_lo = prev;
                    best_hi = std::min(x * ratio, upper);
                }
                prev = x;
                if (x == upper)
                    break;
            }

            // Golden-section refinement inside [best_lo, best_hi].
            const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
            double a = best_lo, b = best_hi;
            double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
            double fc = step_objective(levels, c), fd = step_objective(levels, d);
            const double tol = 1e-6 * std::min(1.0, best);
            while (b - a > tol)
            {
                if (fc > fd)
                {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    fc = step_objective(levels, c);
                }
                else
                {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    fd = step_objective(levels, d);
                }
            }
            double x = 0.5 * (a + b);
            double fx = step_objective(levels, x);
            if (best_val > fx)
            {
                x = best;
                fx = best_val;
            }
            return {x, fx, false};
        }
    }

    OptimalStep optimal_step(long levels)
    {
        check_levels(levels);
        static std::mutex mutex;
        static std::map<long, OptimalStep> cache;
        {
            std::lock_guard lock(mutex);
            if (auto it = cache.find(levels); it != cache.end())
                return it->second;
        }
        const OptimalStep result = solve_optimal_step(levels);
        std::lock_guard lock(mutex);
        cache.emplace(levels, result);
        return result;
    }
}
