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

#include "eia/delayed_csit.hpp"

#include <cmath>
#include <stdexcept>

#include "eia/pairing_driver.hpp"

namespace eia {

namespace {

double phase2_scale(bool normalized) {
    // A difference of two independent CN(0, P) symbols has mean power 2P;
    // the optional normalization brings it back to P.
    return normalized ? 1.0 / std::sqrt(2.0) : 1.0;
}

}  // namespace

Tagged phase2_transmit_csit(const EpisodeCsit& episode, int user) {
    const int k = episode.pair.first.num_users();
    if (user < 0 || user >= k) {
        throw std::invalid_argument("phase2_transmit_csit: user out of range");
    }
    // The transmitter takes the pairing (t1, t2) from feedback and looks the
    // two symbols up in its own send buffer; no channel coefficient enters.
    const Tagged x1{episode.x_t1(user), kSourceOwnMessage | kSourceFeedback};
    const Tagged x2{episode.x_t2(user), kSourceOwnMessage | kSourceFeedback};
    const Tagged scale{cplx{phase2_scale(episode.normalized_phase2), 0.0},
                       kSourceConstant};
    return (x1 - x2) * scale;
}

cplx combine_phase1(const EpisodeCsit& episode, int receiver) {
    const int k = episode.pair.first.num_users();
    if (receiver < 0 || receiver >= k) {
        throw std::invalid_argument("combine_phase1: receiver out of range");
    }
    return episode.y_t1(receiver) +
           episode.y_t2(receiver) / episode.pair.scale.value;
}

std::optional<DecodeResult> decode_csit(const EpisodeCsit& episode,
                                        int receiver,
                                        const ProtocolOptions& options) {
    options.validate();
    const int k = episode.pair.first.num_users();
    if (receiver < 0 || receiver >= k) {
        throw std::invalid_argument("decode_csit: receiver out of range");
    }
    const cplx c = episode.pair.scale.value;
    const double s = phase2_scale(episode.normalized_phase2);
    const Eigen::MatrixXcd& h1 = episode.pair.first.h;

    // Difference estimates: user m's retransmission arrives over slot-(t2+m)
    // fading; dividing by the direct coefficient recovers
    // X_m(t1) - X_m(t2) plus scaled noise.
    Eigen::VectorXcd diff_hat(k);
    for (int m = 0; m < k; ++m) {
        const cplx gain = episode.phase2_channels[m].h(receiver, m);
        if (std::abs(gain) < options.coeff_floor) {
            return std::nullopt;
        }
        diff_hat(m) = episode.phase2_received(receiver, m) / (s * gain);
    }
    if (std::abs(h1(receiver, receiver)) < options.coeff_floor) {
        return std::nullopt;
    }

    // Strip every cross term from the combined statistic, leaving the
    // receiver's own sum component.
    cplx isolated = combine_phase1(episode, receiver);
    for (int m = 0; m < k; ++m) {
        if (m != receiver) {
            isolated -= h1(receiver, m) * diff_hat(m);
        }
    }
    const cplx sum_hat = isolated / h1(receiver, receiver);

    DecodeResult result;
    result.x_t1_hat = 0.5 * (sum_hat + diff_hat(receiver));
    result.x_t2_hat = 0.5 * (sum_hat - diff_hat(receiver));

    // Effective observations: (diff_hat(receiver), isolated) as a linear
    // function of (X_j(t1), X_j(t2)) plus noise. The noise is a fixed linear
    // image of the receiver's K+2 slot noises [Z(t1), Z(t2), Z(t2+m)...], so
    // its covariance is N0 * L * L^H with L the coefficient rows.
    LinearObservationModel model;
    model.gain.resize(2, 2);
    model.gain(0, 0) = 1.0;
    model.gain(0, 1) = -1.0;
    model.gain(1, 0) = h1(receiver, receiver);
    model.gain(1, 1) = h1(receiver, receiver);
    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(2, k + 2);
    coeff(0, 2 + receiver) =
        1.0 / (s * episode.phase2_channels[receiver].h(receiver, receiver));
    coeff(1, 0) = 1.0;
    coeff(1, 1) = 1.0 / c;
    for (int m = 0; m < k; ++m) {
        if (m != receiver) {
            coeff(1, 2 + m) = -h1(receiver, m) /
                              (s * episode.phase2_channels[m].h(receiver, m));
        }
    }
    model.noise_covariance =
        episode.noise_variance * (coeff * coeff.adjoint());
    model.input_power = episode.input_power;
    model.slots_consumed = k + 2;
    result.model = std::move(model);
    return result;
}

namespace {

EpisodeOutcome<EpisodeCsit> run_csit_with_pair(
    const PairedChannels& pair,
    const std::vector<ChannelMatrix>* fixed_phase2,
    const SystemConfig& config, FeedbackKind kind, RngStream& rng,
    const ProtocolOptions& options) {
    const int k = config.num_users;

    EpisodeOutcome<EpisodeCsit> out;
    out.ledger.scheme = "delayed_csit";
    out.ledger.num_users = k;
    out.ledger.messages_decoded = 2 * k;
    out.ledger.slots_consumed = k + 2;

    EpisodeCsit ep;
    ep.pair = pair;
    ep.input_power = config.power;
    ep.noise_variance = config.noise_variance;
    ep.normalized_phase2 = options.normalize_phase2;

    const double symbol_scale = std::sqrt(config.power);
    const double noise_scale = std::sqrt(config.noise_variance);
    ep.x_t1.resize(k);
    ep.x_t2.resize(k);
    for (int i = 0; i < k; ++i) {
        ep.x_t1(i) = symbol_scale * rng.gaussian();
    }
    for (int i = 0; i < k; ++i) {
        ep.x_t2(i) = symbol_scale * rng.gaussian();
    }

    ep.y_t1 = ep.pair.first.h * ep.x_t1;
    ep.y_t2 = ep.pair.second.h * ep.x_t2;
    for (int j = 0; j < k; ++j) {
        ep.y_t1(j) += noise_scale * rng.gaussian();
    }
    for (int j = 0; j < k; ++j) {
        ep.y_t2(j) += noise_scale * rng.gaussian();
    }

    // Receivers detect the complementary pair and feed it back; the message
    // reaches the transmitters delay_slots after t2.
    if (kind == FeedbackKind::kCsi) {
        ep.feedback = FeedbackMessage{CsiFeedback{ep.pair.first, ep.pair.second},
                                      options.delay_slots};
    } else {
        ep.feedback = FeedbackMessage{
            TimeIndexFeedback{ep.pair.t1(), ep.pair.t2()}, options.delay_slots};
    }

    for (int i = 0; i < k; ++i) {
        ep.transmit_log.push_back(TransmitRecord{
            ep.pair.t1(), i, ep.x_t1(i), kSourceOwnMessage, std::nullopt});
    }
    for (int i = 0; i < k; ++i) {
        ep.transmit_log.push_back(TransmitRecord{
            ep.pair.t2(), i, ep.x_t2(i), kSourceOwnMessage, std::nullopt});
    }

    // Phase 2: one slot per user, starting once feedback has arrived.
    ep.phase2_channels.reserve(k);
    ep.phase2_received.resize(k, k);
    double power_sum = 0.0;
    for (int user = 0; user < k; ++user) {
        const std::int64_t slot = ep.pair.t2() + options.delay_slots + user;
        if (fixed_phase2 != nullptr) {
            ep.phase2_channels.push_back((*fixed_phase2)[user]);
        } else {
            ep.phase2_channels.push_back(sample_channel(config, rng, slot));
        }
        const Tagged sent = phase2_transmit_csit(ep, user);
        ep.transmit_log.push_back(TransmitRecord{
            slot, user, sent.value, sent.sources, ep.pair.t2()});
        power_sum += std::norm(sent.value);
        for (int j = 0; j < k; ++j) {
            ep.phase2_received(j, user) =
                ep.phase2_channels.back().h(j, user) * sent.value +
                noise_scale * rng.gaussian();
        }
    }
    out.ledger.mean_phase2_power = power_sum / k;

    out.episode = std::move(ep);
    return out;
}

}  // namespace

EpisodeOutcome<EpisodeCsit> run_episode_csit(
    const SystemConfig& config, PairingMode mode, FeedbackKind kind,
    RngStream& rng, const ProtocolOptions& options) {
    config.validate();
    options.validate();
    auto pair = acquire_pairing(config, mode, rng, options);
    if (!pair) {
        EpisodeOutcome<EpisodeCsit> out;
        out.ledger.scheme = "delayed_csit";
        out.ledger.num_users = config.num_users;
        out.ledger.messages_decoded = 2 * config.num_users;
        out.ledger.slots_consumed = config.num_users + 2;
        out.abort = AbortReason::kNoPairing;
        return out;
    }
    return run_csit_with_pair(*pair, nullptr, config, kind, rng, options);
}

EpisodeOutcome<EpisodeCsit> run_episode_csit_on(
    const PairedChannels& pair,
    const std::vector<ChannelMatrix>& phase2_channels,
    const SystemConfig& config, FeedbackKind kind, RngStream& rng,
    const ProtocolOptions& options) {
    config.validate();
    options.validate();
    if (static_cast<int>(phase2_channels.size()) != config.num_users) {
        throw std::invalid_argument(
            "run_episode_csit_on: need one phase-2 channel per user");
    }
    return run_csit_with_pair(pair, &phase2_channels, config, kind, rng,
                              options);
}

}  // namespace eia
