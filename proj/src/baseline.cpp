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

#include "eia/baseline.hpp"

#include <cmath>
#include <stdexcept>

#include "eia/pairing_driver.hpp"

namespace eia {

SymbolVector sample_transmit_symbols(const SystemConfig& config,
                                     RngStream& rng) {
    config.validate();
    SymbolVector x;
    x.kind = SymbolKind::kTransmit;
    x.values.resize(config.num_users);
    const double scale = std::sqrt(config.power);
    for (int i = 0; i < config.num_users; ++i) {
        x.values(i) = scale * rng.gaussian();
    }
    return x;
}

ReceivedPair transmit_pair(const SymbolVector& x, const PairedChannels& pair,
                           const SystemConfig& config, RngStream& rng) {
    if (x.kind != SymbolKind::kTransmit) {
        throw std::invalid_argument("transmit_pair: x must be a transmit vector");
    }
    if (x.values.size() != pair.first.h.rows()) {
        throw std::invalid_argument(
            "transmit_pair: symbol count must match the channel size");
    }
    const int k = pair.first.num_users();
    const double noise_scale = std::sqrt(config.noise_variance);
    ReceivedPair out;
    out.pair = pair;
    out.noise_variance = config.noise_variance;
    out.y1.kind = SymbolKind::kReceive;
    out.y2.kind = SymbolKind::kReceive;
    out.y1.values = pair.first.h * x.values;
    out.y2.values = pair.second.h * x.values;
    for (int j = 0; j < k; ++j) {
        out.y1.values(j) += noise_scale * rng.gaussian();
    }
    for (int j = 0; j < k; ++j) {
        out.y2.values(j) += noise_scale * rng.gaussian();
    }
    return out;
}

CombinedObservation combine_received(const ReceivedPair& received, int user) {
    const int k = received.pair.first.num_users();
    if (user < 0 || user >= k) {
        throw std::invalid_argument("combine_received: user out of range");
    }
    const cplx c = received.pair.scale.value;
    CombinedObservation out;
    out.value = received.y1.values(user) + received.y2.values(user) / c;
    out.noise_variance =
        received.noise_variance * (1.0 + 1.0 / std::norm(c));
    return out;
}

namespace {

cplx combined_gain(const PairedChannels& pair, int user) {
    return pair.first.h(user, user) +
           pair.second.h(user, user) / pair.scale.value;
}

}  // namespace

LinearObservationModel baseline_user_model(const PairedChannels& pair,
                                           const SystemConfig& config,
                                           int user) {
    config.validate();
    if (user < 0 || user >= pair.first.num_users()) {
        throw std::invalid_argument("baseline_user_model: user out of range");
    }
    LinearObservationModel model;
    model.gain.resize(1, 1);
    model.gain(0, 0) = combined_gain(pair, user);
    model.noise_covariance.resize(1, 1);
    model.noise_covariance(0, 0) =
        config.noise_variance * (1.0 + 1.0 / std::norm(pair.scale.value));
    model.input_power = config.power;
    model.slots_consumed = 2;
    return model;
}

double baseline_rate(const PairedChannels& pair, const SystemConfig& config,
                     int user) {
    config.validate();
    if (user < 0 || user >= pair.first.num_users()) {
        throw std::invalid_argument("baseline_rate: user out of range");
    }
    const double gain2 = std::norm(combined_gain(pair, user));
    const double noise = config.noise_variance *
                         (1.0 + 1.0 / std::norm(pair.scale.value));
    return 0.5 * std::log2(1.0 + gain2 * config.power / noise);
}

EpisodeOutcome<BaselineEpisode> run_episode_baseline(
    const SystemConfig& config, PairingMode mode, RngStream& rng,
    const ProtocolOptions& options) {
    config.validate();
    options.validate();

    EpisodeOutcome<BaselineEpisode> out;
    out.ledger.scheme = "baseline";
    out.ledger.num_users = config.num_users;
    out.ledger.messages_decoded = config.num_users;
    out.ledger.slots_consumed = 2;

    auto pair = acquire_pairing(config, mode, rng, options);
    if (!pair) {
        out.abort = AbortReason::kNoPairing;
        return out;
    }

    BaselineEpisode ep;
    ep.pair = *pair;
    ep.x = sample_transmit_symbols(config, rng);
    ep.received = transmit_pair(ep.x, ep.pair, config, rng);
    ep.input_power = config.power;
    ep.noise_variance = config.noise_variance;

    const int k = config.num_users;
    ep.x_hat.resize(k);
    for (int user = 0; user < k; ++user) {
        const cplx gain = combined_gain(ep.pair, user);
        if (std::abs(gain) < options.coeff_floor) {
            out.abort = AbortReason::kDegenerateChannel;
            return out;
        }
        ep.x_hat(user) = combine_received(ep.received, user).value / gain;
    }

    for (int user = 0; user < k; ++user) {
        ep.transmit_log.push_back(TransmitRecord{
            ep.pair.t1(), user, ep.x.values(user), kSourceOwnMessage,
            std::nullopt});
        ep.transmit_log.push_back(TransmitRecord{
            ep.pair.t2(), user, ep.x.values(user), kSourceOwnMessage,
            std::nullopt});
    }

    out.episode = std::move(ep);
    return out;
}

}  // namespace eia
