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

#include "oracles.hpp"

#include "fhq/fronthaul.hpp"
#include "fhq/quantizer.hpp"

#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using Catch::Approx;
using fhq::UniformQuantizer;

namespace
{
    const std::vector<double> &shared_normals()
    {
        static const std::vector<double> x = oracle::standard_normals(10'000'000, 20260901);
        return x;
    }
}

TEST_CASE("quantize follows the midrise bins", "[quantizer]")
{
    const UniformQuantizer q(4, 1.0);
    CHECK(fhq::quantize(0.3, q) == 0.5);
    CHECK(fhq::quantize(7.2, q) == 1.5);
    CHECK(fhq::quantize(-0.2, q) == -0.5);
    CHECK(fhq::quantize(-7.2, q) == -1.5);
    CHECK(fhq::quantize(1.0, q) == 0.5);
    CHECK(fhq::quantize(-1.0, q) == -1.5);
    CHECK(fhq::quantize(0.0, q) == -0.5);
    CHECK(q.max_output() == 1.5);
}

TEST_CASE("quantize_complex works componentwise", "[quantizer]")
{
    const UniformQuantizer q(4, 1.0);
    CHECK(fhq::quantize_complex({0.3, -0.2}, q) == fhq::cplx(0.5, -0.5));
    CHECK(fhq::quantize_complex({0.0, 0.0}, q) == fhq::cplx(-0.5, -0.5));
    CHECK(fhq::quantize_complex({10.0, 10.0}, q) == fhq::cplx(1.5, 1.5));
}

TEST_CASE("quantizer rejects invalid construction and input", "[quantizer][errors]")
{
    CHECK_THROWS_AS(UniformQuantizer(3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(UniformQuantizer(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(UniformQuantizer(4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(UniformQuantizer(4, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(UniformQuantizer(4, std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(UniformQuantizer::from_bits(0, 1.0), std::invalid_argument);

    const UniformQuantizer q(4, 1.0);
    CHECK_THROWS_AS(fhq::quantize(std::numeric_limits<double>::quiet_NaN(), q), std::invalid_argument);
    CHECK_THROWS_AS(fhq::quantize(std::numeric_limits<double>::infinity(), q), std::invalid_argument);
    CHECK_THROWS_AS(fhq::quantize_complex({0.0, std::numeric_limits<double>::quiet_NaN()}, q), std::invalid_argument);
    CHECK_THROWS_AS(fhq::bussgang_alpha(q, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fhq::optimal_step(5), std::invalid_argument);
    CHECK_THROWS_AS(fhq::optimal_step(0), std::invalid_argument);
}

TEST_CASE("output alphabet is symmetric and complete", "[quantizer]")
{
    const UniformQuantizer q(8, 0.5);
    std::vector<double> seen;
    for (double x = -5.0; x <= 5.0; x += 0.01)
    {
        const double y = fhq::quantize(x, q);
        if (std::find(seen.begin(), seen.end(), y) == seen.end())
            seen.push_back(y);
    }
    std::sort(seen.begin(), seen.end());
    REQUIRE(seen.size() == 8);
    for (std::size_t i = 0; i < seen.size(); ++i)
        CHECK(seen[i] == Approx((static_cast<double>(i) - 4.0 + 0.5) * 0.5).margin(1e-15));
}

TEST_CASE("quantize is odd off boundaries and nondecreasing", "[quantizer][property]")
{
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (long levels : {2L, 4L, 8L, 64L})
    {
        const UniformQuantizer q(levels, 0.37);
        double prev = -std::numeric_limits<double>::infinity();
        for (double x = -12.0; x <= 12.0; x += 0.001)
        {
            const double y = fhq::quantize(x, q);
            CHECK(y >= prev);
            prev = y;
        }
        for (int i = 0; i < 20000; ++i)
        {
            const double x = u(eng);
            if (std::fmod(std::abs(x), 0.37) == 0.0)
                continue;
            CHECK(fhq::quantize(-x, q) == -fhq::quantize(x, q));
        }
    }
}

TEST_CASE("alpha closed form: trivial cases", "[quantizer]")
{
    CHECK(fhq::bussgang_alpha(UniformQuantizer(2, 1.0), 1.0) == Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    const double a1 = fhq::bussgang_alpha(UniformQuantizer(4, 1e-4), 1.0);
    const double a2 = fhq::bussgang_alpha(UniformQuantizer(4, 2e-4), 1.0);
    CHECK(a1 < 1e-3);
    CHECK(a2 / a1 == Approx(2.0).epsilon(1e-6));
}

TEST_CASE("gamma closed form: trivial cases", "[quantizer]")
{
    CHECK(fhq::power_gain_gamma(UniformQuantizer(2, 1.0), 1.0) == Approx(0.25).epsilon(1e-15));
    CHECK(fhq::power_gain_gamma(UniformQuantizer(2, 2.0), 1.0) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("closed forms equal bin-by-bin integration", "[quantizer][property]")
{
    for (long levels : {2L, 4L, 8L, 16L, 64L, 256L, 1024L})
        for (double step : {0.01, 0.1, 0.33, 0.5, 1.0, 1.7, 3.0})
        {
            const oracle::BinMoments m = oracle::bin_moments(levels, step);
            CHECK(fhq::bussgang_alpha_normalized(levels, step) == Approx(m.alpha).epsilon(1e-12).margin(1e-14));
            CHECK(fhq::power_gain_gamma_normalized(levels, step) == Approx(m.gamma).epsilon(1e-12).margin(1e-14));
        }
}

TEST_CASE("alpha and gamma match Monte Carlo at 1e7 samples", "[quantizer][montecarlo]")
{
    const auto &x = shared_normals();
    {
        const double alpha = fhq::bussgang_alpha(UniformQuantizer(16, 0.4), 1.0);
        const auto s = oracle::bussgang_sample(x, 16, 0.4, alpha);
        CHECK(std::abs(s.alpha.mean() - alpha) < 2e-3);
    }
    {
        const double gamma = fhq::power_gain_gamma(UniformQuantizer(8, 0.6), 1.0);
        const auto s = oracle::bussgang_sample(x, 8, 0.6, 0.0);
        CHECK(std::abs(s.gamma.mean() - gamma) < 2e-3);
    }
    {
        const double step = fhq::optimal_step(4).normalized_step;
        const UniformQuantizer q(4, step);
        const double alpha = fhq::bussgang_alpha(q, 1.0);
        const double gamma = fhq::power_gain_gamma(q, 1.0);
        const auto s = oracle::bussgang_sample(x, 4, step, alpha);
        CHECK(std::abs(s.distortion.mean() - fhq::distortion_power(alpha, gamma, 1.0)) < 2e-3);
    }
}

TEST_CASE("Bussgang distortion is uncorrelated with the input", "[quantizer][montecarlo][property]")
{
    const auto &x = shared_normals();
    for (long levels : {2L, 4L, 16L})
    {
        const double step = levels == 2 ? 1.0 : fhq::optimal_step(levels).normalized_step;
        const double alpha = fhq::bussgang_alpha_normalized(levels, step);
        const auto s = oracle::bussgang_sample(x, levels, step, alpha);
        INFO("L=" << levels << " mean=" << s.orthogonality.mean() << " se=" << s.orthogonality.std_error());
        CHECK(std::abs(s.orthogonality.mean()) < 4.0 * s.orthogonality.std_error());
    }
}

TEST_CASE("distortion is uncorrelated with each Gaussian input component", "[quantizer][montecarlo][property]")
{
    std::mt19937_64 eng(99);
    std::normal_distribution<double> nd;
    const double sx = 1.0;
    const double sz = 0.6;
    const double sigma = std::sqrt(sx * sx + sz * sz);
    for (long levels : {4L, 16L})
    {
        const double step = fhq::optimal_step(levels).normalized_step * sigma;
        const UniformQuantizer q(levels, step);
        const double alpha = fhq::bussgang_alpha(q, sigma);
        oracle::MeanAccumulator corr;
        for (int i = 0; i < 10'000'000; ++i)
        {
            const double xv = sx * nd(eng);
            const double zv = sz * nd(eng);
            const double d = oracle::midrise(xv + zv, levels, step) - alpha * (xv + zv);
            corr.add(zv * d);
        }
        INFO("L=" << levels << " mean=" << corr.mean() << " se=" << corr.std_error());
        CHECK(std::abs(corr.mean()) < 4.0 * corr.std_error());
    }
}

TEST_CASE("distortion power and sdnr", "[quantizer]")
{
    CHECK(fhq::distortion_power(1.0, 1.0, 5.0) == 0.0);
    const double a = fhq::bussgang_alpha(UniformQuantizer(2, 1.0), 1.0);
    const double g = fhq::power_gain_gamma(UniformQuantizer(2, 1.0), 1.0);
    CHECK(fhq::distortion_power(a, g, 1.0) == Approx(0.25 - 1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(fhq::distortion_power(a, g, 1.0) == Approx(0.09085).epsilon(1e-4));
    CHECK_THROWS_AS(fhq::distortion_power(1.0, 0.9, 1.0), std::invalid_argument);

    CHECK(std::isinf(fhq::sdnr(1.0, 1.0)));
    CHECK_THROWS_AS(fhq::sdnr(1.0, 0.9), std::invalid_argument);

    const double flat = (2.0 / std::numbers::pi) / (1.0 - 2.0 / std::numbers::pi);
    for (double step : {0.1, 0.5, 1.0, 2.0, 5.0})
    {
        const UniformQuantizer q(2, step);
        CHECK(fhq::sdnr(fhq::bussgang_alpha(q, 1.0), fhq::power_gain_gamma(q, 1.0)) == Approx(flat).epsilon(1e-9));
    }
    CHECK(flat == Approx(1.7519).epsilon(1e-4));
}

TEST_CASE("sdnr at the optimal step matches a grid scan", "[quantizer]")
{
    const auto opt = fhq::optimal_step(4);
    double best = 0.0;
    for (double d = 0.9; d < 1.1; d += 1e-5)
        best = std::max(best, oracle::bin_objective(4, d));
    const double sdnr_grid = best / (1.0 - best);
    const double sdnr_opt = fhq::sdnr(fhq::bussgang_alpha_normalized(4, opt.normalized_step),
                                      fhq::power_gain_gamma_normalized(4, opt.normalized_step));
    CHECK(oracle::rel_diff(sdnr_opt, sdnr_grid) < 1e-4);
}

TEST_CASE("optimal step values", "[quantizer]")
{
    const auto l2 = fhq::optimal_step(2);
    CHECK(l2.flat_objective);
    CHECK(l2.normalized_step == Approx(2.0 * std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
    CHECK(l2.normalized_step == Approx(1.5958).margin(1e-4));

    const auto l4 = fhq::optimal_step(4);
    CHECK_FALSE(l4.flat_objective);
    CHECK(l4.normalized_step == Approx(0.9957).margin(1e-4));
    CHECK(fhq::optimal_step(8).normalized_step == Approx(0.5860).margin(1e-4));
}

TEST_CASE("optimal step agrees with an independent grid scan", "[quantizer][property]")
{
    for (long levels : {4L, 8L, 16L, 64L, 256L})
    {
        const double grid = oracle::grid_scan_argmax(levels, 1e-3, 8.0);
        INFO("L=" << levels);
        CHECK(std::abs(fhq::optimal_step(levels).normalized_step - grid) <= 1e-3);
    }
}

TEST_CASE("optimal step is a stationary point of the objective", "[quantizer][property]")
{
    for (long levels : {4L, 16L, 256L, 4096L, 16384L})
    {
        const auto opt = fhq::optimal_step(levels);
        const double d = opt.normalized_step;
        INFO("L=" << levels << " step=" << d);
        CHECK(fhq::step_objective(levels, d) >= fhq::step_objective(levels, d * (1.0 + 1e-3)));
        CHECK(fhq::step_objective(levels, d) >= fhq::step_objective(levels, d * (1.0 - 1e-3)));
    }
}

TEST_CASE("gamma is never below alpha squared", "[quantizer][property]")
{
    for (long levels = 2; levels <= 4096; levels *= 2)
        for (double step = 1e-3; step < 8.0; step *= 1.37)
        {
            const double a = fhq::bussgang_alpha_normalized(levels, step);
            const double g = fhq::power_gain_gamma_normalized(levels, step);
            CHECK(g >= a * a - 1e-12);
        }
}

TEST_CASE("factors are scale invariant", "[quantizer][property]")
{
    for (long levels : {2L, 8L, 64L})
        for (double c : {0.01, 0.5, 3.0, 1e4})
        {
            const UniformQuantizer q1(levels, 0.3);
            const UniformQuantizer qc(levels, 0.3 * c);
            const auto f1 = fhq::bussgang_factors(q1, 1.0);
            const auto fc = fhq::bussgang_factors(qc, c);
            CHECK(fc.alpha == Approx(f1.alpha).epsilon(1e-13));
            CHECK(fc.gamma == Approx(f1.gamma).epsilon(1e-13));
            CHECK(fc.sdnr == Approx(f1.sdnr).epsilon(1e-11));
        }
}

TEST_CASE("alpha and gamma approach one as levels double", "[quantizer][property]")
{
    double prev_a = 0.0;
    double prev_g = 0.0;
    for (long levels = 2; levels <= 4096; levels *= 2)
    {
        const double d = fhq::optimal_step(levels).normalized_step;
        const double a = fhq::bussgang_alpha_normalized(levels, d);
        const double g = fhq::power_gain_gamma_normalized(levels, d);
        INFO("L=" << levels);
        CHECK(a >= prev_a - 1e-12);
        CHECK(g >= prev_g - 1e-12);
        CHECK(a <= 1.0 + 1e-12);
        prev_a = a;
        prev_g = g;
    }
    CHECK(prev_a == Approx(1.0).margin(1e-5));
    CHECK(prev_g == Approx(1.0).margin(1e-5));
}

TEST_CASE("fronthaul quantizer scales the step per AP", "[quantizer][fronthaul]")
{
    const std::vector<double> var{4.0, 0.01};
    const auto fh = fhq::FronthaulQuantizer::sized(6, var);
    const double d = fhq::optimal_step(64).normalized_step;
    REQUIRE(fh.aps() == 2);
    CHECK(fh.quantizer(0).levels() == 64);
    CHECK(fh.quantizer(0).step() == Approx(d * 2.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(fh.quantizer(1).step() == Approx(d * 0.1 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(fh.alpha() == Approx(fhq::bussgang_alpha_normalized(64, d)).epsilon(1e-15));

    const auto un = fhq::FronthaulQuantizer::unquantized(3);
    CHECK(un.bypass());
    CHECK(un.apply(1, {0.123, -4.5}) == fhq::cplx(0.123, -4.5));
    CHECK(un.alpha() == 1.0);
    CHECK(un.gamma() == 1.0);

    const auto id = fhq::factors_for_bits(0);
    CHECK(id.alpha == 1.0);
    CHECK(id.gamma == 1.0);
    CHECK(id.distortion_power == 0.0);
    CHECK(std::isinf(id.sdnr));
    CHECK_THROWS_AS(fhq::factors_for_bits(-1), std::invalid_argument);
    CHECK_THROWS_AS(fhq::factors_for_bits(31), std::invalid_argument);
    const std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(fhq::FronthaulQuantizer::sized(4, bad), std::invalid_argument);
}
