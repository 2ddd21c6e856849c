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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <variant>
#include <vector>

#include "eia/metrics.hpp"
#include "eia/output_feedback.hpp"
#include "eia/rng.hpp"

using namespace eia;

namespace {

EpisodeOutcome<EpisodeOutputFb> run_one(const SystemConfig& config,
                                        unsigned long long seed,
                                        const ProtocolOptions& options = {}) {
    RngStream rng(seed);
    return run_episode_outputfb(config, PairingMode::kGenie, rng, options);
}

// Independent reference decode: stack the combined statistic and all K
// retransmission observations of receiver j into one square system over
// [x1_j, x2_j, d_m for m != j] and solve it in one shot. What user m sends in
// phase 2 equals its own difference plus a known mixture of the others, so
// every retransmission row touches several unknowns.
std::pair<cplx, cplx> stacked_solve(const EpisodeOutputFb& ep, int receiver) {
    const int k = static_cast<int>(ep.x_t1.size());
    const int j = receiver;
    const cplx c = ep.pair.scale.value;
    const double s = ep.normalized_phase2 ? 1.0 / std::sqrt(2.0) : 1.0;
    const Eigen::MatrixXcd& h1 = ep.pair.first.h;

    auto mix = [&](int row, int col) {
        return h1(row, col) / h1(row, row);
    };
    auto col_of = [&](int m) {
        return 2 + m - (m > j ? 1 : 0);
    };

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(k + 1, k + 1);
    Eigen::VectorXcd b(k + 1);

    a(0, 0) = h1(j, j);
    a(0, 1) = h1(j, j);
    for (int m = 0; m < k; ++m) {
        if (m != j) {
            a(0, col_of(m)) = h1(j, m);
        }
    }
    b(0) = ep.y_t1(j) + ep.y_t2(j) / c;

    for (int m = 0; m < k; ++m) {
        const cplx g = ep.phase2_channels[m].h(j, m) * s;
        for (int l = 0; l < k; ++l) {
            const cplx coeff = g * (l == m ? cplx{1.0, 0.0} : mix(m, l));
            if (l == j) {
                a(1 + m, 0) += coeff;
                a(1 + m, 1) -= coeff;
            } else {
                a(1 + m, col_of(l)) += coeff;
            }
        }
        b(1 + m) = ep.phase2_received(j, m);
    }

    const Eigen::VectorXcd u = a.colPivHouseholderQr().solve(b);
    return {u(0), u(1)};
}

}  // namespace

TEST_CASE("feedback value reduces to own sum plus mixed differences") {
    SystemConfig config;
    config.num_users = 4;
    config.noise_variance = 0.0;
    ProtocolOptions options;
    options.genie_scale.value = cplx{0.9, 0.4};
    const auto out = run_one(config, 61, options);
    REQUIRE(out.completed());
    const EpisodeOutputFb& ep = *out.episode;
    const Eigen::MatrixXcd& h1 = ep.pair.first.h;
    for (int k = 0; k < 4; ++k) {
        const auto fb = build_output_feedback(ep, k);
        REQUIRE(fb.has_value());
        CHECK(fb->user == k);
        cplx expected = ep.x_t1(k) + ep.x_t2(k);
        for (int m = 0; m < 4; ++m) {
            if (m != k) {
                expected += h1(k, m) / h1(k, k) * (ep.x_t1(m) - ep.x_t2(m));
            }
        }
        CHECK(std::abs(fb->value - expected) < 1e-10);
    }
}

TEST_CASE("feedback construction refuses a vanishing direct gain") {
    SystemConfig config;
    config.num_users = 3;
    const auto out = run_one(config, 62);
    REQUIRE(out.completed());
    EpisodeOutputFb ep = *out.episode;
    ep.pair.first.h(1, 1) = cplx{1e-9, 0.0};
    CHECK_FALSE(build_output_feedback(ep, 1).has_value());
    CHECK(build_output_feedback(ep, 0).has_value());
}

TEST_CASE("phase-2 payload carries only feedback and own sources") {
    const Tagged raw{cplx{0.3, -0.2}, kSourceChannel | kSourceNoise};
    const Tagged delivered = deliver_as_feedback(raw);
    const cplx x2{0.5, 0.1};
    const Tagged sent = phase2_transmit_outputfb(delivered, x2, false);
    CHECK(std::abs(sent.value - (raw.value - 2.0 * x2)) < 1e-15);
    CHECK(sent.sources == (kSourceFeedback | kSourceOwnMessage));

    const Tagged scaled = phase2_transmit_outputfb(delivered, x2, true);
    CHECK(std::abs(scaled.value -
                   (raw.value - 2.0 * x2) / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("difference system is unit diagonal and solves exactly") {
    SystemConfig config;
    config.num_users = 5;
    config.noise_variance = 0.0;
    ProtocolOptions options;
    options.genie_scale.value = cplx{0.8, -0.5};
    const auto out = run_one(config, 63, options);
    REQUIRE(out.completed());
    const EpisodeOutputFb& ep = *out.episode;
    for (int j = 0; j < 5; ++j) {
        const auto sys = solve_difference_system(ep, j, options);
        REQUIRE(sys.has_value());
        CHECK(sys->condition_number >= 1.0);
        for (int m = 0; m < 5; ++m) {
            CHECK(std::abs(sys->matrix(m, m) - cplx{1.0, 0.0}) < 1e-12);
            CHECK(std::abs(sys->solution(m) -
                           (ep.x_t1(m) - ep.x_t2(m))) < 1e-8);
        }
    }
}

TEST_CASE("a rank-deficient mixing matrix aborts the solve") {
    SystemConfig config;
    config.num_users = 3;
    config.noise_variance = 0.0;

    // Row 1 of the first slot proportional to row 0 makes the unit-diagonal
    // system singular no matter what phase 2 looked like.
    ChannelMatrix h1;
    h1.h.resize(3, 3);
    h1.h << cplx{1.0, 0.0}, cplx{0.5, 0.0}, cplx{0.3, 0.0},
        cplx{2.0, 0.0}, cplx{1.0, 0.0}, cplx{0.6, 0.0},
        cplx{0.2, 0.0}, cplx{-0.1, 0.0}, cplx{1.1, 0.0};
    h1.time_index = 0;
    PairedChannels pair;
    pair.first = h1;
    pair.scale = PairingScale{};
    pair.second = genie_pair(h1, pair.scale, 1);

    RngStream rng(64);
    std::vector<ChannelMatrix> phase2;
    for (int u = 0; u < 3; ++u) {
        phase2.push_back(sample_channel(config, rng, pair.t2() + 1 + u));
    }
    const auto out = run_episode_outputfb_on(pair, phase2, config, rng);
    REQUIRE(out.completed());
    CHECK_FALSE(solve_difference_system(*out.episode, 0).has_value());
}

TEST_CASE("noiseless decode is exact across sizes and scales") {
    for (int k = 3; k <= 5; ++k) {
        SystemConfig config;
        config.num_users = k;
        config.noise_variance = 0.0;
        ProtocolOptions options;
        options.genie_scale.value = cplx{0.7, 0.6};
        const auto out = run_one(config, 6000 + k, options);
        REQUIRE(out.completed());
        const EpisodeOutputFb& ep = *out.episode;
        for (int j = 0; j < k; ++j) {
            const auto dec = decode_outputfb(ep, j, options);
            REQUIRE(dec.has_value());
            CHECK(std::abs(dec->x_t1_hat - ep.x_t1(j)) < 1e-8);
            CHECK(std::abs(dec->x_t2_hat - ep.x_t2(j)) < 1e-8);
        }
    }
}

TEST_CASE("decode degrades when an observation is tampered with") {
    SystemConfig config;
    config.num_users = 3;
    config.noise_variance = 0.0;
    const auto out = run_one(config, 65);
    REQUIRE(out.completed());
    EpisodeOutputFb ep = *out.episode;
    ep.phase2_received(1, 2) += cplx{0.01, 0.0};
    const auto dec = decode_outputfb(ep, 1);
    REQUIRE(dec.has_value());
    CHECK(std::abs(dec->x_t1_hat - ep.x_t1(1)) > 1e-4);
}

TEST_CASE("substitution decode agrees with a stacked one-shot solve") {
    SystemConfig config;
    config.num_users = 5;
    config.noise_variance = 0.3;
    config.power = 1.5;
    ProtocolOptions options;
    options.genie_scale.value = cplx{1.2, -0.4};
    for (int trial = 0; trial < 10; ++trial) {
        const auto out = run_one(config, 400 + trial, options);
        REQUIRE(out.completed());
        const EpisodeOutputFb& ep = *out.episode;
        for (int j = 0; j < 5; ++j) {
            const auto dec = decode_outputfb(ep, j, options);
            REQUIRE(dec.has_value());
            const auto [x1, x2] = stacked_solve(ep, j);
            CHECK(std::abs(dec->x_t1_hat - x1) < 1e-8);
            CHECK(std::abs(dec->x_t2_hat - x2) < 1e-8);
        }
    }
}

TEST_CASE("decode error covariance matches the reported model") {
    SystemConfig config;
    config.num_users = 3;
    config.noise_variance = 0.5;
    config.power = 1.0;

    ProtocolOptions options;
    RngStream setup(707);
    const auto seed_ep =
        run_episode_outputfb(config, PairingMode::kGenie, setup, options);
    REQUIRE(seed_ep.completed());
    const PairedChannels pair = seed_ep.episode->pair;
    const std::vector<ChannelMatrix> phase2 = seed_ep.episode->phase2_channels;

    const int trials = 20000;
    RngStream rng(708);
    std::vector<Eigen::Matrix2cd> emp(3, Eigen::Matrix2cd::Zero());
    std::vector<Eigen::Matrix2cd> analytic(3);
    for (int t = 0; t < trials; ++t) {
        const auto out =
            run_episode_outputfb_on(pair, phase2, config, rng, options);
        REQUIRE(out.completed());
        const EpisodeOutputFb& ep = *out.episode;
        for (int j = 0; j < 3; ++j) {
            const auto dec = decode_outputfb(ep, j, options);
            REQUIRE(dec.has_value());
            Eigen::Vector2cd err;
            err << dec->x_t1_hat - ep.x_t1(j), dec->x_t2_hat - ep.x_t2(j);
            emp[j] += err * err.adjoint();
            if (t == 0) {
                analytic[j] = estimation_error_covariance(dec->model);
            }
        }
    }
    for (int j = 0; j < 3; ++j) {
        emp[j] /= static_cast<double>(trials);
        const double rel =
            (emp[j] - analytic[j]).norm() / analytic[j].norm();
        CHECK(rel < 0.05);
    }
}

TEST_CASE("feedback payload lists one value per receiver") {
    SystemConfig config;
    config.num_users = 4;
    const auto out = run_one(config, 66);
    REQUIRE(out.completed());
    const EpisodeOutputFb& ep = *out.episode;
    const auto& payload = std::get<OutputFeedback>(ep.feedback.payload);
    REQUIRE(payload.values.size() == 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(payload.values[k].user == k);
        const auto direct = build_output_feedback(ep, k);
        REQUIRE(direct.has_value());
        CHECK(payload.values[k].value == direct->value);
    }
}

TEST_CASE("ledger books 2K messages in K plus 2 slots") {
    for (int k = 3; k <= 8; ++k) {
        SystemConfig config;
        config.num_users = k;
        const auto out = run_one(config, 800 + k);
        REQUIRE(out.completed());
        CHECK(out.ledger.messages_decoded == 2 * k);
        CHECK(out.ledger.slots_consumed == k + 2);
    }
}

TEST_CASE("transmit log is blind and respects the configured delay") {
    SystemConfig config;
    config.num_users = 4;
    for (const int delay : {1, 2}) {
        ProtocolOptions options;
        options.delay_slots = delay;
        const auto out = run_one(config, 67 + delay, options);
        REQUIRE(out.completed());
        const EpisodeOutputFb& ep = *out.episode;
        CHECK(transmit_log_is_blind(ep.transmit_log));
        CHECK(transmit_log_is_causal(ep.transmit_log, delay));
        CHECK_FALSE(transmit_log_is_causal(ep.transmit_log, delay + 1));
        for (int u = 0; u < 4; ++u) {
            CHECK(ep.phase2_channels[u].time_index ==
                  ep.pair.t2() + delay + u);
        }
    }
}

TEST_CASE("episodes are deterministic in the seed") {
    SystemConfig config;
    config.num_users = 4;
    config.noise_variance = 0.8;
    const auto a = run_one(config, 54321);
    const auto b = run_one(config, 54321);
    REQUIRE(a.completed());
    REQUIRE(b.completed());
    for (int j = 0; j < 4; ++j) {
        const auto da = decode_outputfb(*a.episode, j);
        const auto db = decode_outputfb(*b.episode, j);
        REQUIRE(da.has_value());
        REQUIRE(db.has_value());
        CHECK(da->x_t1_hat == db->x_t1_hat);
        CHECK(da->x_t2_hat == db->x_t2_hat);
    }
}
