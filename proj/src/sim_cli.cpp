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

#include "eia/sim_cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "eia/baseline.hpp"
#include "eia/delayed_csit.hpp"
#include "eia/metrics.hpp"
#include "eia/output_feedback.hpp"
#include "eia/verify.hpp"

namespace eia {

namespace {

// Fixed-format double: 12 significant digits, locale-independent.
std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string scale_list(const std::vector<PairingScale>& scales) {
    std::string out;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (i > 0) {
            out += ";";
        }
        out += num(scales[i].value.real()) + "+" +
               num(scales[i].value.imag()) + "i";
    }
    return out;
}

// Result of one episode attempt at unit noise: per-user models for the SNR
// sweep, or the decode error in noiseless mode.
struct EpisodeDraw {
    std::optional<AbortReason> abort;
    std::vector<LinearObservationModel> models;
    double max_decode_error = 0.0;
    double mean_phase2_power = 0.0;
};

EpisodeDraw draw_episode(Scheme scheme, const SystemConfig& config,
                         PairingMode mode, RngStream& rng,
                         const ProtocolOptions& options) {
    EpisodeDraw draw;
    const int k = config.num_users;
    switch (scheme) {
        case Scheme::kBaseline: {
            const auto out = run_episode_baseline(config, mode, rng, options);
            if (out.abort) {
                draw.abort = out.abort;
                return draw;
            }
            for (int u = 0; u < k; ++u) {
                draw.models.push_back(
                    baseline_user_model(out.episode->pair, config, u));
                draw.max_decode_error = std::max(
                    draw.max_decode_error, std::abs(out.episode->x_hat(u) -
                                                    out.episode->x.values(u)));
            }
            return draw;
        }
        case Scheme::kDelayedCsit:
        case Scheme::kDelayedTimeIndex: {
            const FeedbackKind kind = scheme == Scheme::kDelayedCsit
                                          ? FeedbackKind::kCsi
                                          : FeedbackKind::kTimeIndex;
            const auto out = run_episode_csit(config, mode, kind, rng, options);
            if (out.abort) {
                draw.abort = out.abort;
                return draw;
            }
            draw.mean_phase2_power = out.ledger.mean_phase2_power;
            for (int u = 0; u < k; ++u) {
                const auto dec = decode_csit(*out.episode, u, options);
                if (!dec) {
                    draw.abort = AbortReason::kDegenerateChannel;
                    return draw;
                }
                draw.models.push_back(dec->model);
                draw.max_decode_error = std::max(
                    draw.max_decode_error,
                    std::max(std::abs(dec->x_t1_hat - out.episode->x_t1(u)),
                             std::abs(dec->x_t2_hat - out.episode->x_t2(u))));
            }
            return draw;
        }
        case Scheme::kDelayedOutputFb: {
            const auto out = run_episode_outputfb(config, mode, rng, options);
            if (out.abort) {
                draw.abort = out.abort;
                return draw;
            }
            draw.mean_phase2_power = out.ledger.mean_phase2_power;
            for (int u = 0; u < k; ++u) {
                const auto dec = decode_outputfb(*out.episode, u, options);
                if (!dec) {
                    draw.abort = AbortReason::kIllConditioned;
                    return draw;
                }
                draw.models.push_back(dec->model);
                draw.max_decode_error = std::max(
                    draw.max_decode_error,
                    std::max(std::abs(dec->x_t1_hat - out.episode->x_t1(u)),
                             std::abs(dec->x_t2_hat - out.episode->x_t2(u))));
            }
            return draw;
        }
        case Scheme::kFormulas:
            break;
    }
    throw std::logic_error("draw_episode: not a simulation scheme");
}

Rational ledger_ratio(Scheme scheme, int k) {
    if (scheme == Scheme::kBaseline) {
        return make_rational(k, 2);
    }
    return make_rational(2 * k, k + 2);
}

double formula_dof(Scheme scheme, int k) {
    const DofFormulas f = dof_formulas(k);
    return scheme == Scheme::kBaseline ? f.baseline.to_double()
                                       : f.proposed.to_double();
}

void write_config_echo(const RunConfig& config, std::ostream& out) {
    out << "# eia_sim results\n";
    out << "# scheme=" << to_string(config.scheme) << " k=" << config.k_min
        << ".." << config.k_max << " episodes=" << config.episodes
        << " pairing="
        << (config.pairing == PairingMode::kGenie ? "genie" : "search")
        << " seed=" << config.seed
        << " noiseless=" << (config.noiseless ? 1 : 0) << "\n";
    out << "# snr_db=";
    for (std::size_t i = 0; i < config.snr_db.size(); ++i) {
        out << (i > 0 ? ";" : "") << num(config.snr_db[i]);
    }
    out << " delay_slots=" << config.options.delay_slots
        << " normalize_phase2=" << (config.options.normalize_phase2 ? 1 : 0)
        << " search_horizon=" << config.options.search_horizon << "\n";
    out << "# quantizer mag_step=" << num(config.options.quantizer.magnitude_step)
        << " phase_bins=" << config.options.quantizer.phase_bins
        << " mag_cap=" << num(config.options.quantizer.magnitude_cap)
        << " scales=" << scale_list(config.options.quantizer.scale_candidates)
        << "\n";
}

void write_formula_table(const RunConfig& config, std::ostream& out) {
    out << "k,proposed,proposed_decimal,retro_csit,retro_csit_decimal,"
           "retro_outputfb,retro_outputfb_decimal,baseline,baseline_decimal\n";
    for (const FigureRow& row : figure_data(config.k_min, config.k_max)) {
        const DofFormulas f = dof_formulas(row.num_users);
        out << row.num_users << "," << row.proposed.str() << ","
            << num(row.proposed.to_double()) << "," << row.retro_csit.str()
            << "," << num(row.retro_csit.to_double()) << ","
            << row.retro_outputfb.str() << ","
            << num(row.retro_outputfb.to_double()) << "," << f.baseline.str()
            << "," << num(f.baseline.to_double()) << "\n";
    }
}

void write_simulation(const RunConfig& config, std::ostream& out) {
    out << "scheme,k,snr_db,episodes_completed,episodes_discarded,"
           "episodes_no_pairing,mean_sum_rate_bits_per_slot,max_decode_error,"
           "mean_phase2_power,ledger_messages_per_slots,measured_slope,"
           "formula_dof\n";

    for (int k = config.k_min; k <= config.k_max; ++k) {
        SystemConfig system;
        system.num_users = k;
        system.power = 1.0;
        system.noise_variance = config.noiseless ? 0.0 : 1.0;
        system.rng_seed = config.seed;

        std::vector<double> power(config.snr_db.size());
        for (std::size_t i = 0; i < config.snr_db.size(); ++i) {
            power[i] = std::pow(10.0, config.snr_db[i] / 10.0);
        }
        std::vector<double> rate_sum(config.snr_db.size(), 0.0);

        int completed = 0;
        int discarded = 0;
        int no_pairing = 0;
        double max_err = 0.0;
        double phase2_power_sum = 0.0;
        constexpr int kMaxAttempts = 1000;
        for (int ep = 0; ep < config.episodes; ++ep) {
            EpisodeDraw draw;
            bool done = false;
            bool pairing_dry = false;
            for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
                RngStream rng = RngStream::substream(
                    config.seed ^ (0x5eedULL + static_cast<std::uint64_t>(k)),
                    static_cast<std::uint64_t>(ep),
                    static_cast<std::uint64_t>(attempt));
                draw = draw_episode(config.scheme, system, config.pairing, rng,
                                    config.options);
                if (!draw.abort) {
                    done = true;
                } else if (*draw.abort == AbortReason::kNoPairing) {
                    // The search horizon is the episode's whole slot budget;
                    // a dry run counts as an incomplete episode, not a redraw.
                    ++no_pairing;
                    pairing_dry = true;
                    break;
                } else {
                    ++discarded;
                }
            }
            if (!done) {
                if (pairing_dry) {
                    continue;
                }
                throw std::runtime_error(
                    "run_scenario: episode kept aborting after 1000 redraws");
            }
            ++completed;
            max_err = std::max(max_err, draw.max_decode_error);
            phase2_power_sum += draw.mean_phase2_power;
            if (!config.noiseless) {
                for (std::size_t i = 0; i < power.size(); ++i) {
                    double sum_rate = 0.0;
                    for (const LinearObservationModel& m : draw.models) {
                        sum_rate += model_rate_at(m, power[i]);
                    }
                    rate_sum[i] += sum_rate;
                }
            }
        }

        const std::string scheme_name = to_string(config.scheme);
        const std::string ratio = ledger_ratio(config.scheme, k).str();
        const double mean_phase2 =
            completed > 0 ? phase2_power_sum / completed : 0.0;

        if (config.noiseless) {
            out << scheme_name << "," << k << ",," << completed << ","
                << discarded << "," << no_pairing << ",," << num(max_err)
                << "," << num(mean_phase2) << "," << ratio << ",,"
                << num(formula_dof(config.scheme, k)) << "\n";
            continue;
        }

        std::vector<double> mean_rates(config.snr_db.size(), 0.0);
        for (std::size_t i = 0; i < config.snr_db.size(); ++i) {
            if (completed > 0) {
                mean_rates[i] = rate_sum[i] / completed;
            }
            out << scheme_name << "," << k << "," << num(config.snr_db[i])
                << "," << completed << "," << discarded << "," << no_pairing
                << ",";
            if (completed > 0) {
                out << num(mean_rates[i]);
            }
            out << "," << num(max_err) << "," << num(mean_phase2) << ","
                << ratio << ",," << "\n";
        }

        // Summary row: high-SNR slope when the sweep qualifies for one.
        bool slope_ok = completed >= 1000 && config.snr_db.size() >= 2;
        for (double s : config.snr_db) {
            slope_ok = slope_ok && s >= 30.0;
        }
        out << scheme_name << "," << k << ",," << completed << ","
            << discarded << "," << no_pairing << ",,,," << ratio << ",";
        if (slope_ok) {
            out << num(regress_slope(config.snr_db, mean_rates));
        }
        out << "," << num(formula_dof(config.scheme, k)) << "\n";
    }
}

}  // namespace

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::kBaseline:
            return "baseline";
        case Scheme::kDelayedCsit:
            return "delayed_csit";
        case Scheme::kDelayedTimeIndex:
            return "delayed_time_index";
        case Scheme::kDelayedOutputFb:
            return "delayed_output_fb";
        case Scheme::kFormulas:
            return "formulas";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_string(const std::string& name) {
    if (name == "baseline") {
        return Scheme::kBaseline;
    }
    if (name == "delayed_csit") {
        return Scheme::kDelayedCsit;
    }
    if (name == "delayed_time_index") {
        return Scheme::kDelayedTimeIndex;
    }
    if (name == "delayed_output_fb") {
        return Scheme::kDelayedOutputFb;
    }
    if (name == "formulas") {
        return Scheme::kFormulas;
    }
    return std::nullopt;
}

void RunConfig::validate() const {
    if (k_min < 3 || k_max < k_min) {
        throw std::invalid_argument("RunConfig: need 3 <= k_min <= k_max");
    }
    if (episodes < 1) {
        throw std::invalid_argument("RunConfig: episodes must be positive");
    }
    if (scheme != Scheme::kFormulas && !noiseless && snr_db.empty()) {
        throw std::invalid_argument(
            "RunConfig: simulation runs need at least one SNR point (or "
            "--noiseless)");
    }
    options.validate();
}

void run_scenario_to(const RunConfig& config, std::ostream& out) {
    config.validate();
    write_config_echo(config, out);
    if (config.scheme == Scheme::kFormulas) {
        write_formula_table(config, out);
    } else {
        write_simulation(config, out);
    }
}

int run_scenario(const RunConfig& config) {
    config.validate();
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("run_scenario: cannot open output file " +
                                 config.output_path);
    }
    run_scenario_to(config, out);
    out.flush();
    return out.good() ? 0 : 1;
}

int run_verify(std::uint64_t seed, std::ostream& out) {
    int failures = 0;
    for (const PropertyResult& r : run_verification_suite(seed)) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
            << "\n";
        if (!r.pass) {
            ++failures;
        }
    }
    out << (failures == 0 ? "all properties passed\n"
                          : std::to_string(failures) + " properties failed\n");
    return failures;
}

}  // namespace eia
