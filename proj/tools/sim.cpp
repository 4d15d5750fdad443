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

// sim: command-line front end for the fronthaul quantization campaigns.

#include "fhq/campaign.hpp"
#include "fhq/cdf.hpp"
#include "fhq/config.hpp"
#include "fhq/quantizer.hpp"
#include "fhq/validation.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace
{
    const char *const config_keys[] = {"m_aps",  "k_users", "l_serv_m", "snr_edge_db", "sigma_sh_db", "d0_m",
                                       "d1_m",   "gamma0",  "gamma1",   "tau",         "sigma_s2",    "n_smallscale"};

    struct CommonOptions
    {
        std::string config_file;
        std::string bits;
        std::optional<std::size_t> geoms;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> workers;
        std::string out_dir = "out";
        std::map<std::string, std::string> overrides;
    };

    void add_common(CLI::App *cmd, CommonOptions &opt, bool campaign)
    {
        cmd->add_option("--config", opt.config_file, "Flat key=value configuration file")->check(CLI::ExistingFile);
        cmd->add_option("--seed", opt.seed, "Master 64-bit seed");
        cmd->add_option("--workers", opt.workers, "Worker threads (results do not depend on it)");
        for (const char *key : config_keys)
            cmd->add_option_function<std::string>(
                std::string("--") + key, [&opt, key](const std::string &v) { opt.overrides[key] = v; },
                std::string("Override config key ") + key);
        if (campaign)
        {
            cmd->add_option("--bits", opt.bits, "Comma-separated bit depths, 0 = unquantized");
            cmd->add_option("--geoms", opt.geoms, "Number of geometry/shadowing realizations");
            cmd->add_option("--out", opt.out_dir, "Output directory");
        }
    }

    fhq::SimulationConfig resolve(const CommonOptions &opt)
    {
        fhq::SimulationConfig cfg;
        if (!opt.config_file.empty())
            cfg = fhq::load_config(opt.config_file, cfg);
        for (const auto &[key, value] : opt.overrides)
            cfg.set(key, value);
        if (!opt.bits.empty())
            cfg.bits_list = fhq::parse_int_list(opt.bits);
        if (opt.geoms)
            cfg.n_geometries = *opt.geoms;
        if (opt.seed)
            cfg.seed = *opt.seed;
        if (opt.workers)
            cfg.workers = *opt.workers;
        cfg.validate();
        return cfg;
    }

    void log(const std::string &msg) { std::cerr << "[sim] " << msg << '\n'; }

    void report_series(const std::vector<fhq::CdfSeries> &series, const char *unit)
    {
        char buf[160];
        for (const auto &s : series)
        {
            std::snprintf(buf, sizeof(buf), "%-12s n=%zu  p10=%.4g  median=%.4g  p90=%.4g %s", s.label.c_str(),
                          s.size(), fhq::quantile(s, 0.1), fhq::median(s), fhq::quantile(s, 0.9), unit);
            log(buf);
        }
    }

    int run_campaign(const CommonOptions &opt, const std::string &campaign, bool sinr)
    {
        const fhq::SimulationConfig cfg = resolve(opt);
        const auto t0 = std::chrono::steady_clock::now();
        log(campaign + ": M=" + std::to_string(cfg.m_aps) + " K=" + std::to_string(cfg.k_users) +
            " geometries=" + std::to_string(cfg.n_geometries) + " seed=" + std::to_string(cfg.seed));
        const auto series = sinr ? fhq::run_sinr_campaign(cfg) : fhq::run_nmse_campaign(cfg);
        const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report_series(series, sinr ? "dB" : "");
        for (const auto &path : fhq::write_cdf_csv(series, opt.out_dir, campaign, cfg))
            log("wrote " + path.string());
        log("done in " + std::to_string(secs) + " s");
        return 0;
    }

    int run_quantizer_table(const std::string &levels_text)
    {
        std::printf("levels,bits,step_opt,alpha,gamma,sdnr_db\n");
        for (int levels : fhq::parse_int_list(levels_text))
        {
            const fhq::OptimalStep opt = fhq::optimal_step(levels);
            const fhq::BussgangFactors f = fhq::bussgang_factors(fhq::UniformQuantizer(levels, opt.normalized_step), 1.0);
            std::printf("%d,%.6g,%.6g,%.6g,%.6g,%.6g\n", levels, std::log2(static_cast<double>(levels)),
                        opt.normalized_step, f.alpha, f.gamma, fhq::linear_to_db(f.sdnr));
        }
        return 0;
    }

    int run_validate(const CommonOptions &opt, const fhq::ValidationOptions &vopt)
    {
        const fhq::SimulationConfig cfg = resolve(opt);
        fhq::ValidationOptions v = vopt;
        v.workers = cfg.workers;
        log("validate: trials=" + std::to_string(v.trials) + " seed=" + std::to_string(cfg.seed));
        const fhq::ValidationReport report = fhq::validate_closed_forms(cfg, v);
        for (const auto &c : report.checks)
            std::printf("%s  %-70s empirical=%.6g predicted=%.6g se=%.3g tol=%.3g\n", c.passed ? "PASS" : "FAIL",
                        c.name.c_str(), c.empirical, c.predicted, c.std_error, c.tolerance);
        return report.passed() ? 0 : 1;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Fronthaul quantization campaigns for cell-free massive MIMO uplinks"};
    app.require_subcommand(1);

    CommonOptions nmse_opt, sinr_opt, validate_opt;
    bool legacy = false;
    std::optional<std::size_t> smallscale;
    std::string levels = "2,4,8,16,32,64,128,256,512,1024,2048,4096";
    fhq::ValidationOptions vopt;
    std::string sizing = "instantaneous";

    auto *nmse = app.add_subcommand("nmse-cdf", "CDF of the channel-estimation normalized MSE");
    add_common(nmse, nmse_opt, true);

    auto *sinr = app.add_subcommand("sinr-cdf", "CDF of the per-user MMSE SINR with perfect CSI");
    add_common(sinr, sinr_opt, true);
    sinr->add_option("--smallscale", smallscale, "Rayleigh draws per geometry");
    sinr->add_flag("--legacy-eq21", legacy, "Detector models receiver noise as sigma_n^2 instead of alpha^2 sigma_n^2");

    auto *validate = app.add_subcommand("validate", "Compare closed forms with sample-level simulation");
    add_common(validate, validate_opt, false);
    validate->add_option("--trials", vopt.trials, "Monte Carlo trials per check")->check(CLI::Range(2, 100000000));
    validate->add_option("--sizing", sizing, "Detection-check quantizer sizing")
        ->check(CLI::IsMember({"instantaneous", "large-scale"}));

    auto *table = app.add_subcommand("quantizer-table", "Optimal step and Bussgang factors per level count");
    table->add_option("--levels", levels, "Comma-separated even level counts");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*nmse)
            return run_campaign(nmse_opt, "nmse", false);
        if (*sinr)
        {
            if (smallscale)
                sinr_opt.overrides["n_smallscale"] = std::to_string(*smallscale);
            if (legacy)
                sinr_opt.overrides["legacy_eq21"] = "true";
            return run_campaign(sinr_opt, "sinr", true);
        }
        if (*validate)
        {
            vopt.detection_sizing =
                sizing == "large-scale" ? fhq::DetectionSizing::large_scale : fhq::DetectionSizing::instantaneous;
            return run_validate(validate_opt, vopt);
        }
        if (*table)
            return run_quantizer_table(levels);
    }
    catch (const std::exception &e)
    {
        std::cerr << "sim: error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
