// SPDX-License-Identifier: Apache-2.0
//
// eiasim - ergodic interference alignment simulation library
// Copyright (C) 2026 the eiasim authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Distributed under the License on an "AS IS" BASIS, WITHOUT WARRANTIES OR
// CONDITIONS OF ANY KIND, either express or implied. See the License for the
// specific language governing permissions and limitations.

#include <CLI11.hpp>
#include <complex>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "eia/sim_cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"eia_sim - K-user interference alignment simulator"};
    app.require_subcommand(1);

    // ------------------------------------------------------------------ run
    CLI::App* run = app.add_subcommand(
        "run", "simulate a scheme (or emit the formula table) to a CSV file");

    std::string scheme_name = "delayed_csit";
    run->add_option("--scheme", scheme_name,
                    "baseline, delayed_csit, delayed_time_index, "
                    "delayed_output_fb, or formulas")
        ->capture_default_str();

    int k_single = 3;
    std::vector<int> k_range;
    CLI::Option* opt_k =
        run->add_option("--k", k_single, "number of users")->capture_default_str();
    CLI::Option* opt_range =
        run->add_option("--k-range", k_range,
                        "inclusive user-count range, e.g. --k-range 3 50")
            ->expected(2);
    opt_k->excludes(opt_range);

    std::vector<double> snr_db;
    run->add_option("--snr-db", snr_db,
                    "SNR point in dB; repeat the flag for a sweep");

    int episodes = 1000;
    run->add_option("--episodes", episodes, "episodes per (scheme, K) cell")
        ->capture_default_str();

    std::string pairing = "genie";
    run->add_option("--pairing", pairing, "genie or search")
        ->check(CLI::IsMember({"genie", "search"}))
        ->capture_default_str();

    bool noiseless = false;
    run->add_flag("--noiseless", noiseless,
                  "run with zero noise and report max decode error");

    std::uint64_t seed = 1;
    run->add_option("--seed", seed, "rng seed")->capture_default_str();

    std::string out_path = "results.csv";
    run->add_option("--out", out_path, "output CSV path")->capture_default_str();

    int delay_slots = 1;
    run->add_option("--delay-slots", delay_slots, "feedback latency in slots")
        ->capture_default_str();

    bool normalize = false;
    run->add_flag("--normalize-phase2", normalize,
                  "rescale retransmissions to unit mean power");

    double mag_step = 1.0;
    run->add_option("--mag-step", mag_step, "quantizer magnitude step")
        ->capture_default_str();
    int phase_bins = 4;
    run->add_option("--phase-bins", phase_bins, "quantizer phase sectors")
        ->capture_default_str();
    double mag_cap = 2.0;
    run->add_option("--mag-cap", mag_cap, "quantizer magnitude cap")
        ->capture_default_str();
    std::vector<double> scales;
    run->add_option("--scale", scales,
                    "pairing scale candidate as RE IM; repeatable");
    std::int64_t horizon = 200000;
    run->add_option("--horizon", horizon, "pairing search budget in slots")
        ->capture_default_str();

    // --------------------------------------------------------------- verify
    CLI::App* verify = app.add_subcommand(
        "verify", "run the protocol invariant suite and report pass/fail");
    std::uint64_t verify_seed = 1;
    verify->add_option("--seed", verify_seed, "rng seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(verify)) {
            return eia::run_verify(verify_seed, std::cout) == 0 ? 0 : 1;
        }

        eia::RunConfig config;
        const auto scheme = eia::scheme_from_string(scheme_name);
        if (!scheme) {
            std::cerr << "unknown scheme: " << scheme_name << "\n";
            return 2;
        }
        config.scheme = *scheme;
        if (opt_range->count() > 0) {
            config.k_min = k_range[0];
            config.k_max = k_range[1];
        } else {
            config.k_min = k_single;
            config.k_max = k_single;
        }
        config.snr_db = snr_db;
        config.episodes = episodes;
        config.pairing = pairing == "genie" ? eia::PairingMode::kGenie
                                            : eia::PairingMode::kSearch;
        config.noiseless = noiseless;
        config.seed = seed;
        config.output_path = out_path;
        config.options.delay_slots = delay_slots;
        config.options.normalize_phase2 = normalize;
        config.options.quantizer.magnitude_step = mag_step;
        config.options.quantizer.phase_bins = phase_bins;
        config.options.quantizer.magnitude_cap = mag_cap;
        config.options.search_horizon = horizon;
        if (!scales.empty()) {
            if (scales.size() % 2 != 0) {
                std::cerr << "--scale takes RE IM pairs\n";
                return 2;
            }
            config.options.quantizer.scale_candidates.clear();
            for (std::size_t i = 0; i < scales.size(); i += 2) {
                config.options.quantizer.scale_candidates.push_back(
                    eia::PairingScale{{scales[i], scales[i + 1]}});
            }
        }

        const int rc = eia::run_scenario(config);
        if (rc == 0) {
            std::cout << "wrote " << config.output_path << "\n";
        }
        return rc;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
