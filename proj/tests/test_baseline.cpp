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

#include "eia/baseline.hpp"
#include "eia/channel.hpp"
#include "eia/metrics.hpp"
#include "eia/rng.hpp"

using namespace eia;

namespace {

PairedChannels pair_from(const ChannelMatrix& h1, cplx scale) {
    PairedChannels pair;
    pair.first = h1;
    pair.scale = PairingScale{scale};
    pair.second = genie_pair(h1, pair.scale, h1.time_index + 1);
    return pair;
}

PairedChannels make_genie_pair(const SystemConfig& config, cplx scale,
                               unsigned long long seed) {
    RngStream rng(seed);
    return pair_from(sample_channel(config, rng, 0), scale);
}

// A pair whose first slot has unit diagonal entries, for pinning rate values.
PairedChannels unit_diagonal_pair(int num_users, cplx scale) {
    ChannelMatrix h1;
    h1.h = Eigen::MatrixXcd::Zero(num_users, num_users);
    for (int i = 0; i < num_users; ++i) {
        for (int j = 0; j < num_users; ++j) {
            h1.h(i, j) = (i == j) ? cplx{1.0, 0.0}
                                  : cplx{0.1 * (i + 1), -0.05 * (j + 1)};
        }
    }
    h1.time_index = 0;
    return pair_from(h1, scale);
}

// Own-signal coefficient of the combined statistic.
cplx combined_gain_of(const PairedChannels& pair, int user) {
    return pair.first.h(user, user) +
           pair.second.h(user, user) / pair.scale.value;
}

}  // namespace

TEST_CASE("transmit symbols have the configured power") {
    SystemConfig config;
    config.num_users = 4;
    config.power = 2.5;
    RngStream rng(11);
    double acc = 0.0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
        const SymbolVector x = sample_transmit_symbols(config, rng);
        REQUIRE(x.values.size() == 4);
        CHECK(x.kind == SymbolKind::kTransmit);
        for (int u = 0; u < 4; ++u) {
            acc += std::norm(x.values(u));
        }
    }
    CHECK(acc / (trials * 4) == doctest::Approx(2.5).epsilon(0.03));
}

TEST_CASE("noiseless reception is the plain channel product") {
    SystemConfig config;
    config.num_users = 3;
    config.noise_variance = 0.0;
    const PairedChannels pair = make_genie_pair(config, cplx{0.8, -0.6}, 5);
    RngStream rng(7);
    const SymbolVector x = sample_transmit_symbols(config, rng);
    const ReceivedPair rx = transmit_pair(x, pair, config, rng);

    const Eigen::VectorXcd y1 = pair.first.h * x.values;
    const Eigen::VectorXcd y2 = pair.second.h * x.values;
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(rx.y1.values(k) - y1(k)) < 1e-12);
        CHECK(std::abs(rx.y2.values(k) - y2(k)) < 1e-12);
    }
    CHECK(rx.y1.kind == SymbolKind::kReceive);
}

TEST_CASE("combining cancels cross links and sets the noise variance") {
    SystemConfig config;
    config.num_users = 3;
    config.noise_variance = 0.0;

    SUBCASE("unit scale") {
        const PairedChannels pair = make_genie_pair(config, cplx{1.0, 0.0}, 21);
        RngStream rng(3);
        const SymbolVector x = sample_transmit_symbols(config, rng);
        const ReceivedPair rx = transmit_pair(x, pair, config, rng);
        for (int k = 0; k < 3; ++k) {
            const CombinedObservation obs = combine_received(rx, k);
            const cplx expected = 2.0 * pair.first.h(k, k) * x.values(k);
            CHECK(std::abs(obs.value - expected) < 1e-10);
            CHECK(obs.noise_variance == doctest::Approx(0.0));
        }
    }

    SUBCASE("purely imaginary scale") {
        config.noise_variance = 0.8;
        const PairedChannels pair = make_genie_pair(config, cplx{0.0, 2.0}, 22);
        RngStream rng(4);
        const SymbolVector x = sample_transmit_symbols(config, rng);
        const ReceivedPair rx = transmit_pair(x, pair, config, rng);
        const CombinedObservation obs = combine_received(rx, 1);
        // N0 (1 + 1/|c|^2) with |c|^2 = 4
        CHECK(obs.noise_variance == doctest::Approx(0.8 * 1.25).epsilon(1e-12));
        // The combined gain keeps both slot contributions.
        const cplx gain = combined_gain_of(pair, 1);
        const cplx expected_gain =
            pair.first.h(1, 1) + pair.second.h(1, 1) / cplx{0.0, 2.0};
        CHECK(std::abs(gain - expected_gain) < 1e-12);
    }
}

TEST_CASE("combined noise variance matches an empirical redraw") {
    SystemConfig config;
    config.num_users = 3;
    config.noise_variance = 0.7;
    config.power = 1.0;
    const cplx scale{0.6, 0.8};
    const PairedChannels pair = make_genie_pair(config, scale, 33);

    RngStream rng(101);
    const SymbolVector x = sample_transmit_symbols(config, rng);
    const int k = 2;
    const cplx gain = combined_gain_of(pair, k);

    double acc = 0.0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        const ReceivedPair rx = transmit_pair(x, pair, config, rng);
        const CombinedObservation obs = combine_received(rx, k);
        acc += std::norm(obs.value - gain * x.values(k));
    }
    const double expected =
        config.noise_variance * (1.0 + 1.0 / std::norm(scale));
    CHECK(acc / trials == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("baseline rate agrees with the observation model route") {
    SystemConfig config;
    config.num_users = 3;
    config.power = 4.0;
    config.noise_variance = 0.5;
    for (const cplx scale : {cplx{1.0, 0.0}, cplx{-0.4, 1.3}}) {
        const PairedChannels pair = make_genie_pair(config, scale, 55);
        for (int k = 0; k < 3; ++k) {
            const double direct = baseline_rate(pair, config, k);
            const LinearObservationModel m =
                baseline_user_model(pair, config, k);
            CHECK(direct == doctest::Approx(model_rate(m)).epsilon(1e-12));
            CHECK(m.slots_consumed == 2);
        }
    }
}

TEST_CASE("baseline rate pins the unit-diagonal reference value") {
    // Unit direct gain, P = 1, N0 = 1, scale 1: the combined observation is
    // 2 x + z with noise variance 2, so the per-user rate over the two slots
    // is (1/2) log2(1 + 4/2) = (1/2) log2 3.
    SystemConfig config;
    config.num_users = 3;
    config.power = 1.0;
    config.noise_variance = 1.0;
    const PairedChannels pair = unit_diagonal_pair(3, cplx{1.0, 0.0});
    const double expected = 0.7924812503605781;
    for (int k = 0; k < 3; ++k) {
        CHECK(baseline_rate(pair, config, k) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("baseline episode decodes exactly without noise") {
    SystemConfig config;
    config.num_users = 5;
    config.noise_variance = 0.0;
    config.rng_seed = 77;
    RngStream rng(config.rng_seed);
    const EpisodeOutcome<BaselineEpisode> out =
        run_episode_baseline(config, PairingMode::kGenie, rng);
    REQUIRE(out.completed());
    const BaselineEpisode& ep = *out.episode;
    for (int k = 0; k < 5; ++k) {
        CHECK(std::abs(ep.x_hat(k) - ep.x.values(k)) < 1e-10);
    }
    CHECK(out.ledger.messages_decoded == 5);
    CHECK(out.ledger.slots_consumed == 2);
    CHECK(out.ledger.scheme == "baseline");
}

TEST_CASE("baseline transmit log is blind and repeats the symbol") {
    SystemConfig config;
    config.num_users = 3;
    config.rng_seed = 13;
    RngStream rng(config.rng_seed);
    const EpisodeOutcome<BaselineEpisode> out =
        run_episode_baseline(config, PairingMode::kGenie, rng);
    REQUIRE(out.completed());
    const BaselineEpisode& ep = *out.episode;
    CHECK(transmit_log_is_blind(ep.transmit_log));
    CHECK(transmit_log_is_causal(ep.transmit_log, 1));
    REQUIRE(ep.transmit_log.size() == 6);
    for (int k = 0; k < 3; ++k) {
        // Same payload in both slots of the pair.
        CHECK(ep.transmit_log[2 * k].value == ep.transmit_log[2 * k + 1].value);
        CHECK(ep.transmit_log[2 * k].slot == ep.pair.t1());
        CHECK(ep.transmit_log[2 * k + 1].slot == ep.pair.t2());
    }
}

TEST_CASE("baseline episodes are deterministic in the seed") {
    SystemConfig config;
    config.num_users = 4;
    config.rng_seed = 2024;
    RngStream rng_a(config.rng_seed);
    RngStream rng_b(config.rng_seed);
    const auto a = run_episode_baseline(config, PairingMode::kGenie, rng_a);
    const auto b = run_episode_baseline(config, PairingMode::kGenie, rng_b);
    REQUIRE(a.completed());
    REQUIRE(b.completed());
    for (int k = 0; k < 4; ++k) {
        CHECK(a.episode->x_hat(k) == b.episode->x_hat(k));
    }
}
