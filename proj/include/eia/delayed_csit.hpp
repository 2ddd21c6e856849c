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

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "eia/channel.hpp"
#include "eia/episode.hpp"
#include "eia/provenance.hpp"

namespace eia {

// Delayed-CSIT scheme. Phase 1: every transmitter sends an independent fresh
// symbol on each slot of a complementary pair (t1, t2), blind to the fading.
// Once feedback reveals that the two slots paired, phase 2 runs K
// retransmission slots, one per user: user k alone sends the difference
// X_k(t1) - X_k(t2). Each receiver reads all K differences off the air,
// subtracts the cross terms from its combined phase-1 statistic, and is left
// with two linear equations in its own two symbols. 2K messages move in K+2
// protocol slots.
//
// The scheme works identically whether the feedback carries the measured
// matrices or just the two slot indices; transmitters only ever use the
// indices to look up their own past symbols.

struct EpisodeCsit {
    PairedChannels pair;
    Eigen::VectorXcd x_t1;  // message symbols sent at t1, one per user
    Eigen::VectorXcd x_t2;  // message symbols sent at t2
    Eigen::VectorXcd y_t1;  // phase-1 observations, one per receiver
    Eigen::VectorXcd y_t2;
    FeedbackMessage feedback;
    // Retransmission slot of user k is pair.t2() + delay_slots + k; entry k
    // of phase2_channels is the fading of that slot and column k of
    // phase2_received holds what each receiver heard then.
    std::vector<ChannelMatrix> phase2_channels;
    Eigen::MatrixXcd phase2_received;  // receivers x retransmission slots
    double input_power = 1.0;
    double noise_variance = 0.0;
    bool normalized_phase2 = false;
    std::vector<TransmitRecord> transmit_log;
};

// Value user k puts on the air in its phase-2 slot: the difference of its two
// phase-1 symbols (scaled to unit mean power when normalization is on). The
// provenance tag records that only own messages and feedback went in.
Tagged phase2_transmit_csit(const EpisodeCsit& episode, int user);

// Receiver-side combined statistic Y_j(t1) + Y_j(t2) / c. For an exact
// complement every cross term appears as the difference
// H_jm(t1) (X_m(t1) - X_m(t2)), which phase 2 lets the receiver remove.
cplx combine_phase1(const EpisodeCsit& episode, int receiver);

// Zero-forcing decode of one receiver's two symbols, with the effective 2x2
// observation model the estimates came through. nullopt when a division
// coefficient is below coeff_floor (episode-level abort).
std::optional<DecodeResult> decode_csit(const EpisodeCsit& episode,
                                        int receiver,
                                        const ProtocolOptions& options = {});

// One full episode. The same rng draw sequence is used for both feedback
// kinds, so episodes differ only in the recorded feedback payload.
EpisodeOutcome<EpisodeCsit> run_episode_csit(
    const SystemConfig& config, PairingMode mode, FeedbackKind kind,
    RngStream& rng, const ProtocolOptions& options = {});

// Same episode mechanics on externally fixed channels: fresh messages and
// noise, fixed fading. Used to audit noise statistics against the model.
EpisodeOutcome<EpisodeCsit> run_episode_csit_on(
    const PairedChannels& pair,
    const std::vector<ChannelMatrix>& phase2_channels,
    const SystemConfig& config, FeedbackKind kind, RngStream& rng,
    const ProtocolOptions& options = {});

}  // namespace eia
