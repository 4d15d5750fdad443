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

#include "fhq/channel.hpp"
#include "fhq/detection.hpp"
#include "fhq/fronthaul.hpp"
#include "fhq/random.hpp"
#include "fhq/validation.hpp"

#include "catch2/catch_amalgamated.hpp"

#include <cmath>

using Catch::Approx;

namespace
{
    fhq::ReceiverModel model_for(const fhq::CMatrix &g, int bits, double sigma_s2, double sigma_n2)
    {
        const auto f = fhq::factors_for_bits(bits);
        std::vector<double> var(static_cast<std::size_t>(g.rows()));
        for (Eigen::Index m = 0; m < g.rows(); ++m)
            var[static_cast<std::size_t>(m)] = sigma_s2 * g.row(m).cwiseAbs2().sum() + sigma_n2;
        fhq::ReceiverModel model;
        model.alpha = f.alpha;
        model.sigma_s2 = sigma_s2;
        model.sigma_n2 = sigma_n2;
        model.c_delta = fhq::distortion_covariance(var, f.alpha, f.gamma);
        return model;
    }

    fhq::ReceiverModel unquantized_model(double sigma_s2, double sigma_n2)
    {
        fhq::ReceiverModel model;
        model.sigma_s2 = sigma_s2;
        model.sigma_n2 = sigma_n2;
        return model;
    }

    fhq::LargeScaleGains random_gains(Eigen::Index m, Eigen::Index k, std::uint64_t seed, double lo_db = -30.0,
                                      double hi_db = 0.0)
    {
        fhq::Rng rng(seed);
        fhq::LargeScaleGains g;
        g.beta.resize(m, k);
        for (Eigen::Index i = 0; i < g.beta.size(); ++i)
            g.beta.data()[i] = fhq::db_to_linear(rng.uniform(lo_db, hi_db));
        return g;
    }

    double max_rel(const fhq::CMatrix &a, const fhq::CMatrix &b)
    {
        return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
    }
}

TEST_CASE("distortion covariance", "[detection]")
{
    fhq::LargeScaleGains one;
    one.beta = fhq::RMatrix::Constant(1, 1, 1.0);
    const auto f4 = fhq::factors_for_bits(2);
    const auto c = fhq::distortion_covariance(one, f4.alpha, f4.gamma, 1.0, 0.1);
    REQUIRE(c.diag.size() == 1);
    CHECK(c.diag(0) == Approx((f4.gamma - f4.alpha * f4.alpha) * 1.1).epsilon(1e-14));
    CHECK(c.diag(0) == Approx(fhq::distortion_power(fhq::bussgang_alpha_normalized(4, fhq::optimal_step(4).normalized_step),
                                                    fhq::power_gain_gamma_normalized(4, fhq::optimal_step(4).normalized_step), 1.1))
                           .epsilon(1e-14));

    const auto gains = random_gains(5, 3, 1);
    const auto z = fhq::distortion_covariance(gains, 0.9, 0.81, 1.0, 0.1);
    CHECK(z.is_zero());
    const auto f = fhq::factors_for_bits(6);
    const auto cd = fhq::distortion_covariance(gains, f.alpha, f.gamma, 2.0, 0.1);
    for (Eigen::Index m = 0; m < 5; ++m)
        CHECK(cd.diag(m) == Approx((f.gamma - f.alpha * f.alpha) * (2.0 * gains.beta.row(m).sum() + 0.1)).epsilon(1e-14));
    CHECK((cd.diag.array() > 0.0).all());
    CHECK_THROWS_AS(fhq::distortion_covariance(gains, 1.0, 0.5, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("per-AP distortion power at fixed G", "[detection][montecarlo]")
{
    fhq::Rng rng(31);
    const auto gains = random_gains(3, 2, 5, -10.0, 0.0);
    const auto ch = fhq::draw_channel(gains, rng);
    fhq::NoiseModel noise;
    noise.sigma_n2 = 0.05;
    std::vector<double> var(3);
    for (Eigen::Index m = 0; m < 3; ++m)
        var[static_cast<std::size_t>(m)] = ch.g.row(m).cwiseAbs2().sum() + noise.sigma_n2;
    const auto fh = fhq::FronthaulQuantizer::sized(4, var);
    const auto cd = fhq::distortion_covariance(var, fh.alpha(), fh.gamma());

    std::vector<oracle::MeanAccumulator> dist(3), power(3);
    for (int i = 0; i < 100000; ++i)
    {
        const fhq::CVector s = fhq::draw_symbols(2, 1.0, rng);
        fhq::CVector x = ch.g * s;
        fhq::CVector y(3);
        for (Eigen::Index m = 0; m < 3; ++m)
        {
            x(m) += rng.complex_normal(noise.sigma_n2);
            y(m) = fh.apply(static_cast<std::size_t>(m), x(m));
            dist[static_cast<std::size_t>(m)].add(std::norm(y(m) - fh.alpha() * x(m)));
            power[static_cast<std::size_t>(m)].add(std::norm(y(m)));
        }
    }
    for (std::size_t m = 0; m < 3; ++m)
    {
        CHECK(oracle::rel_diff(dist[m].mean(), cd.diag(static_cast<Eigen::Index>(m))) < 0.03);
        CHECK(oracle::rel_diff(power[m].mean(), fh.gamma() * var[m]) < 0.02);
    }
}

TEST_CASE("uplink simulation", "[detection]")
{
    fhq::Rng rng(2);
    const auto gains = random_gains(4, 2, 3);
    const auto ch = fhq::draw_channel(gains, rng);
    fhq::NoiseModel silent;
    silent.sigma_n2 = 0.0;
    const fhq::CVector s = fhq::draw_symbols(2, 1.0, rng);
    const fhq::CVector y = fhq::simulate_uplink(ch, s, silent, fhq::FronthaulQuantizer::unquantized(4), rng);
    CHECK((y - ch.g * s).cwiseAbs().maxCoeff() == 0.0);

    const std::vector<double> var(4, 1.0);
    const auto fh = fhq::FronthaulQuantizer::sized(3, var);
    const fhq::CVector zero = fhq::CVector::Zero(2);
    const fhq::CVector yq = fhq::simulate_uplink(ch, zero, silent, fh, rng);
    for (Eigen::Index m = 0; m < 4; ++m)
        CHECK(yq(m) == fhq::quantize_complex({0.0, 0.0}, fh.quantizer(static_cast<std::size_t>(m))));

    CHECK_THROWS_AS(fhq::simulate_uplink(ch, fhq::CVector::Zero(3), silent, fh, rng), std::invalid_argument);
    CHECK_THROWS_AS(fhq::simulate_uplink(ch, s, silent, fhq::FronthaulQuantizer::unquantized(3), rng),
                    std::invalid_argument);
}

TEST_CASE("unquantized detector is the textbook MMSE receiver", "[detection]")
{
    for (std::uint64_t seed : {1u, 2u, 3u})
    {
        fhq::Rng rng(seed);
        const auto gains = random_gains(12, 4, seed + 10);
        const auto ch = fhq::draw_channel(gains, rng);
        for (double s2 : {1.0, 2.5})
        {
            const auto model = unquantized_model(s2, 0.02);
            const auto ref = oracle::textbook_mmse(ch.g, s2, 0.02);
            CHECK(max_rel(fhq::mmse_weights(ch.g, model), ref.w) < 1e-12);
            CHECK(max_rel(fhq::error_covariance(ch.g, model), ref.error_cov) < 1e-12);
            CHECK(max_rel(fhq::error_covariance_direct(ch.g, model), ref.error_cov) < 1e-12);
        }
    }
}

TEST_CASE("scalar detector examples", "[detection]")
{
    fhq::CMatrix g(1, 1);
    g(0, 0) = fhq::cplx(0.8, -0.6);
    const double n2 = 0.25;
    const auto model = unquantized_model(1.0, n2);
    const fhq::CMatrix w = fhq::mmse_weights(g, model);
    CHECK(std::abs(w(0, 0) - std::conj(g(0, 0)) / (std::norm(g(0, 0)) + n2)) < 1e-15);
    const fhq::CMatrix ce = fhq::error_covariance(g, model);
    CHECK(ce(0, 0).real() == Approx(n2 / (std::norm(g(0, 0)) + n2)).epsilon(1e-14));
    const auto sinr = fhq::per_user_sinr(ce, 1.0);
    CHECK(sinr(0) == Approx(std::norm(g(0, 0)) / n2).epsilon(1e-12));
}

TEST_CASE("singular detector system is reported", "[detection][errors]")
{
    fhq::Rng rng(1);
    const auto ch = fhq::draw_channel(random_gains(6, 2, 4), rng);
    const auto model = unquantized_model(1.0, 0.0);
    CHECK_THROWS_AS(fhq::mmse_weights(ch.g, model), fhq::SingularSystemError);
    CHECK_THROWS_AS(fhq::error_covariance(ch.g, model), fhq::SingularSystemError);

    auto bad = unquantized_model(1.0, 0.1);
    bad.c_delta.diag = fhq::RVector::Ones(5);
    CHECK_THROWS_AS(fhq::mmse_weights(ch.g, bad), std::invalid_argument);
    bad = unquantized_model(0.0, 0.1);
    CHECK_THROWS_AS(fhq::mmse_weights(ch.g, bad), std::invalid_argument);
}

TEST_CASE("detect applies the weights", "[detection]")
{
    fhq::Rng rng(6);
    const auto ch = fhq::draw_channel(random_gains(40, 3, 7, -3.0, 0.0), rng);
    const fhq::CVector s = fhq::draw_symbols(3, 1.0, rng);
    const auto model = unquantized_model(1.0, 1e-3);
    const fhq::CMatrix w = fhq::mmse_weights(ch.g, model);
    CHECK(fhq::detect(w, fhq::CVector::Zero(40)).isZero(0.0));
    CHECK_THROWS_AS(fhq::detect(w, fhq::CVector::Zero(39)), std::invalid_argument);

    double prev = std::numeric_limits<double>::infinity();
    for (double n2 : {1e-2, 1e-4, 1e-6, 1e-8})
    {
        const fhq::CMatrix wn = fhq::mmse_weights(ch.g, unquantized_model(1.0, n2));
        const double err = (fhq::detect(wn, ch.g * s) - s).norm() / s.norm();
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("error covariance forms agree and are valid", "[detection][property]")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        fhq::Rng rng(seed);
        const auto ch = fhq::draw_channel(random_gains(10, 4, seed), rng);
        for (int bits : {2, 6, 12})
        {
            const auto model = model_for(ch.g, bits, 1.0 + 0.1 * static_cast<double>(seed % 3), 1e-3);
            const fhq::CMatrix direct = fhq::error_covariance_direct(ch.g, model);
            const fhq::CMatrix info = fhq::error_covariance_information(ch.g, model);
            const fhq::CMatrix w = fhq::mmse_weights(ch.g, model);
            const fhq::CMatrix quad = fhq::error_covariance_for_weights(w, ch.g, model);
            INFO("seed " << seed << " bits " << bits);
            CHECK(max_rel(info, direct) < 1e-9);
            CHECK(max_rel(quad, direct) < 1e-9);

            const fhq::CMatrix ce = fhq::error_covariance(ch.g, model);
            CHECK((ce - ce.adjoint()).cwiseAbs().maxCoeff() == 0.0);
            const Eigen::SelfAdjointEigenSolver<fhq::CMatrix> eig(ce);
            CHECK(eig.eigenvalues().minCoeff() > 0.0);
            for (Eigen::Index k = 0; k < 4; ++k)
            {
                CHECK(ce(k, k).real() > 0.0);
                CHECK(ce(k, k).real() <= model.sigma_s2);
            }
        }
    }
}

TEST_CASE("MMSE weights minimize every user's error", "[detection][property]")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        fhq::Rng rng(seed + 100);
        const auto ch = fhq::draw_channel(random_gains(8, 3, seed + 100), rng);
        for (int bits : {4, 8, 14})
        {
            const auto model = model_for(ch.g, bits, 1.0, 1e-4);
            const fhq::CMatrix w = fhq::mmse_weights(ch.g, model);
            const fhq::RVector best = fhq::error_covariance_for_weights(w, ch.g, model).diagonal().real();
            for (double eps : {-1e-2, 1e-2})
            {
                const fhq::RVector pert =
                    fhq::error_covariance_for_weights(w * (1.0 + eps), ch.g, model).diagonal().real();
                CHECK((best.array() <= pert.array()).all());
            }
        }
    }
}

TEST_CASE("SINR grows with bit depth at fixed G", "[detection][property]")
{
    fhq::Rng rng(55);
    const auto gains = random_gains(30, 6, 55, -60.0, -20.0);
    const auto ch = fhq::draw_channel(gains, rng);
    fhq::NoiseModel noise;
    noise.sigma_n2 = 3.6e-7;
    fhq::RVector prev = fhq::RVector::Zero(6);
    for (int b = 4; b <= 14; ++b)
    {
        const auto model = fhq::receiver_model(gains, fhq::factors_for_bits(b), noise);
        const fhq::RVector sinr = fhq::per_user_sinr(fhq::error_covariance(ch.g, model), 1.0);
        INFO("b=" << b);
        CHECK((sinr.array() >= prev.array()).all());
        prev = sinr;
    }
    const auto unq = fhq::receiver_model(gains, fhq::factors_for_bits(0), noise);
    CHECK((fhq::per_user_sinr(fhq::error_covariance(ch.g, unq), 1.0).array() >= prev.array()).all());
}

TEST_CASE("unscaled-noise detector is never better than the MMSE detector", "[detection]")
{
    fhq::Rng rng(8);
    const auto gains = random_gains(20, 4, 8, -60.0, -20.0);
    const auto ch = fhq::draw_channel(gains, rng);
    fhq::NoiseModel noise;
    noise.sigma_n2 = 3.6e-7;
    for (int b : {2, 6, 10})
    {
        const auto f = fhq::factors_for_bits(b);
        const auto mmse = fhq::receiver_model(gains, f, noise, fhq::NoiseScaling::bussgang);
        const auto legacy = fhq::receiver_model(gains, f, noise, fhq::NoiseScaling::unscaled);
        const fhq::RVector a = fhq::error_covariance(ch.g, mmse).diagonal().real();
        const fhq::RVector l = fhq::error_covariance(ch.g, legacy).diagonal().real();
        CHECK((l.array() >= a.array() * (1.0 - 1e-12)).all());
    }
}

TEST_CASE("per-user SINR", "[detection]")
{
    fhq::CMatrix ce = fhq::CMatrix::Zero(2, 2);
    ce(0, 0) = 1.0;
    ce(1, 1) = 1.0 / 101.0;
    const auto sinr = fhq::per_user_sinr(ce, 1.0);
    CHECK(sinr(0) == 0.0);
    CHECK(sinr(1) == Approx(100.0).epsilon(1e-13));
    CHECK(fhq::linear_to_db(sinr(1)) == Approx(20.0).epsilon(1e-13));
    ce(0, 0) = 0.0;
    CHECK_THROWS_AS(fhq::per_user_sinr(ce, 1.0), std::invalid_argument);
}

TEST_CASE("mmse_detect bundles the detector outputs", "[detection]")
{
    fhq::Rng rng(9);
    const auto gains = random_gains(6, 2, 9);
    const auto ch = fhq::draw_channel(gains, rng);
    const auto model = model_for(ch.g, 8, 1.0, 1e-3);
    const fhq::CVector y = fhq::CVector::Random(6);
    const auto r = fhq::mmse_detect(ch.g, y, model);
    CHECK(max_rel(r.weights, fhq::mmse_weights(ch.g, model)) == 0.0);
    CHECK(max_rel(r.s_hat, r.weights * y) < 1e-15);
    CHECK(r.rcond > 0.0);
    CHECK(r.sinr.size() == 2);
}

TEST_CASE("sample-level detection error matches C_e where the input is noise dominated", "[detection][montecarlo]")
{
    // noise-dominated inputs: weak cross-AP correlation
    fhq::Rng rng(404);
    const auto gains = random_gains(8, 2, 404, -3.0, 0.0);
    const auto ch = fhq::draw_channel(gains, rng);
    fhq::NoiseModel noise;
    noise.sigma_n2 = 1.0;
    for (int b : {4, 8})
    {
        const auto stats = fhq::run_detection_trials(ch, gains, noise, b, fhq::DetectionSizing::instantaneous, 100000, 9);
        for (Eigen::Index k = 0; k < 2; ++k)
        {
            INFO("b=" << b << " user " << k << " empirical " << stats.empirical_error(k) << " predicted "
                      << stats.predicted_error(k) << " se " << stats.error_std_error(k));
            CHECK(std::abs(stats.empirical_error(k) - stats.predicted_error(k)) < 3.0 * stats.error_std_error(k));
            CHECK(oracle::rel_diff(stats.empirical_error(k), stats.predicted_error(k)) < 0.03);
        }
        CHECK(stats.orthogonality_z.maxCoeff() < 4.0);
    }
}

TEST_CASE("Jensen bounds", "[detection]")
{
    fhq::LargeScaleGains one;
    one.beta = fhq::RMatrix::Constant(1, 1, 1.0);
    fhq::DistortionCovariance cd{fhq::RVector::Constant(1, 0.5)};
    const auto b1 = fhq::jensen_bound_diagonals(one, cd);
    CHECK(b1.gram(0) == 1.0);
    CHECK(b1.distortion(0) == Approx(0.5).epsilon(1e-15));

    const auto gains = random_gains(50, 4, 17);
    const auto f = fhq::factors_for_bits(4);
    const double n2 = 1e-3;
    const auto cdelta = fhq::distortion_covariance(gains, f.alpha, f.gamma, 1.0, n2);
    const auto b = fhq::jensen_bound_diagonals(gains, cdelta);
    for (Eigen::Index k = 0; k < 4; ++k)
    {
        double denom = 0.0;
        for (Eigen::Index m = 0; m < 50; ++m)
            denom += gains.beta(m, k) / (gains.beta.row(m).sum() + n2);
        CHECK(b.distortion(k) == Approx((f.gamma - f.alpha * f.alpha) / denom).epsilon(1e-12));
        CHECK(b.gram(k) == Approx(1.0 / gains.beta.col(k).sum()).epsilon(1e-14));
    }

    fhq::Rng rng(71);
    const auto mc = fhq::jensen_monte_carlo(gains, cdelta, 10000, rng);
    for (Eigen::Index k = 0; k < 4; ++k)
    {
        CHECK(mc.gram_mean(k, k).real() >= b.gram(k));
        CHECK(mc.distortion_mean(k, k).real() >= b.distortion(k));
        for (Eigen::Index j = 0; j < 4; ++j)
        {
            if (j == k)
                continue;
            CHECK(std::abs(mc.gram_mean(k, j).real()) < 4.0 * mc.gram_se_re(k, j));
            CHECK(std::abs(mc.gram_mean(k, j).imag()) < 4.0 * mc.gram_se_im(k, j));
            CHECK(std::abs(mc.distortion_mean(k, j).real()) < 4.0 * mc.distortion_se_re(k, j));
            CHECK(std::abs(mc.distortion_mean(k, j).imag()) < 4.0 * mc.distortion_se_im(k, j));
        }
    }
    CHECK_THROWS_AS(fhq::jensen_bound_diagonals(gains, cd), std::invalid_argument);
    CHECK_THROWS_AS(fhq::jensen_monte_carlo(gains, cdelta, 1, rng), std::invalid_argument);
}
