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

#include "eia/verify.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "eia/baseline.hpp"
#include "eia/channel.hpp"
#include "eia/delayed_csit.hpp"
#include "eia/episode.hpp"
#include "eia/metrics.hpp"
#include "eia/output_feedback.hpp"
#include "eia/provenance.hpp"

namespace eia {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

PropertyResult check_formula_table() {
    PropertyResult r{"formula_table", false, ""};
    const DofFormulas f3 = dof_formulas(3);
    bool ok = f3.proposed == make_rational(6, 5) &&
              f3.retro_csit == make_rational(9, 8) &&
              f3.retro_outputfb == make_rational(6, 5) &&
              f3.baseline == make_rational(3, 2);
    // The proposed scheme should never fall below either retrospective
    // scheme, strictly above both from K = 4 on.
    for (long long k = 3; k <= 100 && ok; ++k) {
        const DofFormulas f = dof_formulas(k);
        ok = !rational_less(f.proposed, f.retro_csit) &&
             !rational_less(f.proposed, f.retro_outputfb);
        if (k >= 4) {
            ok = ok && rational_less(f.retro_csit, f.proposed) &&
                 rational_less(f.retro_outputfb, f.proposed);
        }
    }
    const DofFormulas big = dof_formulas(1000000);
    ok = ok && std::abs(big.proposed.to_double() - 2.0) < 1e-4 &&
         std::abs(big.retro_csit.to_double() - 1.0) < 1e-4 &&
         std::abs(big.retro_outputfb.to_double() - 1.0) < 1e-4;
    r.pass = ok;
    r.detail = "K=3 table " + f3.proposed.str() + ", " + f3.retro_csit.str() +
               ", " + f3.retro_outputfb.str() + ", baseline " +
               f3.baseline.str() + "; dominance K=3..100; limits at K=1e6";
    return r;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_baseline_error(int k, int episodes, std::uint64_t seed) {
    SystemConfig config{k, 1.0, 0.0, seed};
    double worst = 0.0;
    for (int ep = 0; ep < episodes; ++ep) {
        RngStream rng = RngStream::substream(seed, ep);
        const auto out =
            run_episode_baseline(config, PairingMode::kGenie, rng);
        if (!out.completed()) {
            return kInf;
        }
        for (int u = 0; u < k; ++u) {
            worst = std::max(worst, std::abs(out.episode->x_hat(u) -
                                             out.episode->x.values(u)));
        }
    }
    return worst;
}

double max_csit_error(int k, int episodes, std::uint64_t seed,
                      FeedbackKind kind) {
    SystemConfig config{k, 1.0, 0.0, seed};
    double worst = 0.0;
    for (int ep = 0; ep < episodes; ++ep) {
        RngStream rng = RngStream::substream(seed, ep);
        const auto out =
            run_episode_csit(config, PairingMode::kGenie, kind, rng);
        if (!out.completed()) {
            return kInf;
        }
        for (int u = 0; u < k; ++u) {
            const auto dec = decode_csit(*out.episode, u);
            if (!dec) {
                return kInf;
            }
            worst = std::max(worst,
                             std::abs(dec->x_t1_hat - out.episode->x_t1(u)));
            worst = std::max(worst,
                             std::abs(dec->x_t2_hat - out.episode->x_t2(u)));
        }
    }
    return worst;
}

double max_outputfb_error(int k, int episodes, std::uint64_t seed) {
    SystemConfig config{k, 1.0, 0.0, seed};
    double worst = 0.0;
    for (int ep = 0; ep < episodes; ++ep) {
        RngStream rng = RngStream::substream(seed, ep);
        const auto out = run_episode_outputfb(config, PairingMode::kGenie, rng);
        if (!out.completed()) {
            return kInf;
        }
        for (int u = 0; u < k; ++u) {
            const auto dec = decode_outputfb(*out.episode, u);
            if (!dec) {
                return kInf;
            }
            worst = std::max(worst,
                             std::abs(dec->x_t1_hat - out.episode->x_t1(u)));
            worst = std::max(worst,
                             std::abs(dec->x_t2_hat - out.episode->x_t2(u)));
        }
    }
    return worst;
}

PropertyResult check_noiseless_exactness(std::uint64_t seed) {
    PropertyResult r{"noiseless_exactness", false, ""};
    double worst = 0.0;
    for (int k = 3; k <= 5; ++k) {
        worst = std::max(worst, max_baseline_error(k, 20, seed + k));
        worst = std::max(worst,
                         max_csit_error(k, 20, seed + k, FeedbackKind::kCsi));
        worst = std::max(worst, max_csit_error(k, 20, seed + k,
                                               FeedbackKind::kTimeIndex));
        worst = std::max(worst, max_outputfb_error(k, 20, seed + k));
    }
    r.pass = worst < 1e-8;
    r.detail = "max |x_hat - x| = " + fmt(worst) +
               " over K=3..5, all schemes, noiseless genie pairing";
    return r;
}

PropertyResult check_ledger(std::uint64_t seed) {
    PropertyResult r{"ledger_accounting", false, ""};
    bool ok = true;
    for (int k = 3; k <= 8 && ok; ++k) {
        SystemConfig config{k, 1.0, 1.0, seed};
        RngStream rng1 = RngStream::substream(seed, 100 + k);
        RngStream rng2 = RngStream::substream(seed, 200 + k);
        RngStream rng3 = RngStream::substream(seed, 300 + k);
        const auto a = run_episode_csit(config, PairingMode::kGenie,
                                        FeedbackKind::kCsi, rng1);
        const auto b = run_episode_outputfb(config, PairingMode::kGenie, rng2);
        const auto c = run_episode_baseline(config, PairingMode::kGenie, rng3);
        ok = a.ledger.messages_decoded == 2 * k &&
             a.ledger.slots_consumed == k + 2 &&
             b.ledger.messages_decoded == 2 * k &&
             b.ledger.slots_consumed == k + 2 &&
             c.ledger.messages_decoded == k && c.ledger.slots_consumed == 2;
    }
    r.pass = ok;
    r.detail = "2K messages in K+2 slots (delayed schemes), K in 2 (baseline), "
               "K=3..8";
    return r;
}

PropertyResult check_feedback_equivalence(std::uint64_t seed) {
    PropertyResult r{"feedback_kind_equivalence", false, ""};
    SystemConfig config{4, 2.0, 0.5, seed};
    double worst = 0.0;
    for (int ep = 0; ep < 20; ++ep) {
        RngStream rng_a = RngStream::substream(seed, 400 + ep);
        RngStream rng_b = RngStream::substream(seed, 400 + ep);
        const auto a = run_episode_csit(config, PairingMode::kGenie,
                                        FeedbackKind::kCsi, rng_a);
        const auto b = run_episode_csit(config, PairingMode::kGenie,
                                        FeedbackKind::kTimeIndex, rng_b);
        if (!a.completed() || !b.completed()) {
            r.detail = "episode aborted";
            return r;
        }
        for (int u = 0; u < config.num_users; ++u) {
            const auto da = decode_csit(*a.episode, u);
            const auto db = decode_csit(*b.episode, u);
            if (!da || !db) {
                r.detail = "decode aborted";
                return r;
            }
            worst = std::max(worst, std::abs(da->x_t1_hat - db->x_t1_hat));
            worst = std::max(worst, std::abs(da->x_t2_hat - db->x_t2_hat));
        }
        worst = std::max(
            worst, (a.episode->phase2_received - b.episode->phase2_received)
                       .cwiseAbs()
                       .maxCoeff());
    }
    r.pass = worst == 0.0;
    r.detail = "max difference between CSI and time-index feedback runs = " +
               fmt(worst) + " (must be exactly 0)";
    return r;
}

PropertyResult check_blindness(std::uint64_t seed) {
    PropertyResult r{"transmitter_blindness", false, ""};
    bool ok = true;
    for (int ep = 0; ep < 20 && ok; ++ep) {
        SystemConfig config{5, 1.0, 1.0, seed};
        ProtocolOptions options;
        options.delay_slots = 1 + (ep % 3);
        RngStream rng_a = RngStream::substream(seed, 500 + ep);
        RngStream rng_b = RngStream::substream(seed, 600 + ep);
        const auto a = run_episode_csit(config, PairingMode::kGenie,
                                        FeedbackKind::kTimeIndex, rng_a,
                                        options);
        const auto b =
            run_episode_outputfb(config, PairingMode::kGenie, rng_b, options);
        if (!a.completed() || !b.completed()) {
            r.detail = "episode aborted";
            return r;
        }
        ok = transmit_log_is_blind(a.episode->transmit_log) &&
             transmit_log_is_blind(b.episode->transmit_log) &&
             transmit_log_is_causal(a.episode->transmit_log,
                                    options.delay_slots) &&
             transmit_log_is_causal(b.episode->transmit_log,
                                    options.delay_slots);
    }
    r.pass = ok;
    r.detail = "no transmitted value used channel state; all transmissions "
               "respected the feedback delay (delays 1..3)";
    return r;
}

PropertyResult check_pairing_detection(std::uint64_t seed) {
    PropertyResult r{"pairing_detection", false, ""};
    SystemConfig config{3, 1.0, 1.0, seed};
    bool ok = true;
    double recovered_err = 0.0;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        RngStream rng = RngStream::substream(seed, 700 + trial);
        const ChannelMatrix h1 = sample_channel(config, rng, 10);
        const cplx c = rng.gaussian() + cplx{2.0, 0.0};  // keep |c| away from 0
        const ChannelMatrix h2 = genie_pair(h1, PairingScale{c}, 11);
        const auto hit = is_complementary_pair(h1, h2, 1e-9);
        ok = hit.has_value();
        if (ok) {
            recovered_err = std::max(recovered_err, std::abs(hit->value - c));
            ok = recovered_err < 1e-9;
        }
        // A single perturbed entry must break the match at tight tolerance.
        ChannelMatrix h2_bad = h2;
        h2_bad.h(0, 1) += cplx{1e-3, 0.0};
        ok = ok && !is_complementary_pair(h1, h2_bad, 5e-4).has_value() &&
             is_complementary_pair(h1, h2_bad, 2e-3).has_value();
    }
    r.pass = ok;
    r.detail = "genie pairs detected, scale recovered to " +
               fmt(recovered_err) + "; 1e-3 perturbation rejected at 5e-4";
    return r;
}

PropertyResult check_quantizer(std::uint64_t seed) {
    PropertyResult r{"quantizer_geometry", false, ""};
    QuantizerConfig qc;
    qc.magnitude_step = 0.5;
    qc.phase_bins = 8;
    qc.magnitude_cap = 2.0;
    const Quantizer quant(qc);
    const double bound = 0.5 * qc.magnitude_step +
                         qc.magnitude_cap * std::numbers::pi / qc.phase_bins;
    RngStream rng = RngStream::substream(seed, 800);
    double worst = 0.0;
    bool idempotent = true;
    for (int i = 0; i < 20000; ++i) {
        const cplx v = rng.gaussian();
        const QuantizedEntry cell = quant.quantize_entry(v);
        const cplx rep = quant.cell_value(cell);
        if (std::abs(v) <= qc.magnitude_cap) {
            worst = std::max(worst, std::abs(v - rep));
        }
        idempotent = idempotent && quant.quantize_entry(rep) == cell;
    }
    r.pass = worst <= bound + 1e-12 && idempotent;
    r.detail = "max in-cap distortion " + fmt(worst) + " vs bound " +
               fmt(bound) + "; representatives are fixed points";
    return r;
}

PropertyResult check_search_pairing(std::uint64_t seed) {
    PropertyResult r{"search_pairing", false, ""};
    SystemConfig config{3, 1.0, 1.0, seed};
    QuantizerConfig qc;  // defaults: step 1.0, 4 bins, cap 2.0, c = 1
    // Plant an exact complement in an i.i.d. stream and require the search
    // to return it with the right slots and scale.
    bool ok = true;
    for (int trial = 0; trial < 10 && ok; ++trial) {
        RngStream rng = RngStream::substream(seed, 900 + trial);
        std::vector<ChannelMatrix> block;
        for (int t = 0; t < 6; ++t) {
            block.push_back(sample_channel(config, rng, t));
        }
        // Quantize the planted complement so the pair matches exactly on the
        // grid regardless of where the original entries sat in their cells.
        block[4] = quantize(block[1], qc);
        block[4].time_index = 4;
        ChannelMatrix complement =
            genie_pair(block[4], PairingScale{cplx{1.0, 0.0}}, 5);
        block.push_back(complement);
        const auto hit = find_pairing(block, qc);
        ok = hit.has_value() && hit->t2() == 5 &&
             std::abs(hit->scale.value - cplx{1.0, 0.0}) < 1e-12;
    }
    r.pass = ok;
    r.detail = "planted complements found by the quantized stream search";
    return r;
}

PropertyResult check_determinism(std::uint64_t seed) {
    PropertyResult r{"determinism", false, ""};
    SystemConfig config{4, 1.0, 1.0, seed};
    double worst = 0.0;
    for (int rep = 0; rep < 2; ++rep) {
        RngStream a1 = RngStream::substream(seed, 1000);
        RngStream a2 = RngStream::substream(seed, 1000);
        const auto e1 = run_episode_outputfb(config, PairingMode::kGenie, a1);
        const auto e2 = run_episode_outputfb(config, PairingMode::kGenie, a2);
        if (!e1.completed() || !e2.completed()) {
            r.detail = "episode aborted";
            return r;
        }
        const auto d1 = decode_outputfb(*e1.episode, 0);
        const auto d2 = decode_outputfb(*e2.episode, 0);
        if (!d1 || !d2) {
            r.detail = "decode aborted";
            return r;
        }
        worst = std::max(
            worst, (e1.episode->phase2_received - e2.episode->phase2_received)
                       .cwiseAbs()
                       .maxCoeff());
        worst = std::max(worst, std::abs(d1->x_t1_hat - d2->x_t1_hat));
    }
    r.pass = worst == 0.0;
    r.detail = "same seed reproduces episodes and decodes bit for bit";
    return r;
}

}  // namespace

std::vector<PropertyResult> run_verification_suite(std::uint64_t seed) {
    std::vector<PropertyResult> results;
    results.push_back(check_formula_table());
    results.push_back(check_noiseless_exactness(seed));
    results.push_back(check_ledger(seed));
    results.push_back(check_feedback_equivalence(seed));
    results.push_back(check_blindness(seed));
    results.push_back(check_pairing_detection(seed));
    results.push_back(check_quantizer(seed));
    results.push_back(check_search_pairing(seed));
    results.push_back(check_determinism(seed));
    return results;
}

}  // namespace eia
