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

// Delayed output feedback scheme. Transmitters never learn the channel, not
// even retroactively; each receiver k detects the complementary pair from
// its own channel measurements, combines its two observations, normalizes by
// its direct gain, and feeds the single number
//   F_k = (Y_k(t1) + Y_k(t2)/c) / H_kk(t1)
// back to its transmitter. In phase 2, user k alone sends F_k - 2 X_k(t2).
// For an exact complement that equals the own difference D_k plus a known
// mixture of the other users' differences, so the K retransmissions give
// every receiver a unit-diagonal linear system in the K differences. Solving
// it and substituting back recovers both own symbols: again 2K messages in
// K+2 slots, now with one complex feedback value per receiver.

struct EpisodeOutputFb {
    PairedChannels pair;
    Eigen::VectorXcd x_t1;
    Eigen::VectorXcd x_t2;
    Eigen::VectorXcd y_t1;
    Eigen::VectorXcd y_t2;
    FeedbackMessage feedback;  // payload is OutputFeedback with K values
    std::vector<ChannelMatrix> phase2_channels;
    Eigen::MatrixXcd phase2_received;  // receivers x retransmission slots
    double input_power = 1.0;
    double noise_variance = 0.0;
    bool normalized_phase2 = false;
    std::vector<TransmitRecord> transmit_log;
};

// Receiver k's feedback value F_k. nullopt when |H_kk(t1)| is below
// coeff_floor (the episode aborts as degenerate).
std::optional<OutputFeedbackValue> build_output_feedback(
    const EpisodeOutputFb& episode, int user, double coeff_floor = 1e-6);

// Value user k sends in its phase-2 slot, F_k - 2 X_k(t2), built from the
// delivered feedback and the transmitter's own buffered symbol. The tag
// shows only feedback and own-message sources ever enter.
Tagged phase2_transmit_outputfb(const Tagged& delivered_feedback, cplx x_t2,
                                bool normalized);

// The unit-diagonal system one receiver assembles from the K retransmission
// slots: matrix(k, m) = H_km(t1) / H_kk(t1), rhs from the received values,
// solution = the K estimated differences. nullopt when a divisor underflows
// coeff_floor or the condition number exceeds condition_limit.
struct DifferenceSystem {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd rhs;
    Eigen::VectorXcd solution;
    double condition_number = 0.0;
};

std::optional<DifferenceSystem> solve_difference_system(
    const EpisodeOutputFb& episode, int receiver,
    const ProtocolOptions& options = {});

// Full decode for one receiver, with the effective 2x2 model. The abort
// conditions of solve_difference_system apply.
std::optional<DecodeResult> decode_outputfb(const EpisodeOutputFb& episode,
                                            int receiver,
                                            const ProtocolOptions& options = {});

EpisodeOutcome<EpisodeOutputFb> run_episode_outputfb(
    const SystemConfig& config, PairingMode mode, RngStream& rng,
    const ProtocolOptions& options = {});

// Same episode mechanics on externally fixed channels: fresh messages and
// noise, fixed fading. Used to audit decode-error statistics against the
// model covariance.
EpisodeOutcome<EpisodeOutputFb> run_episode_outputfb_on(
    const PairedChannels& pair,
    const std::vector<ChannelMatrix>& phase2_channels,
    const SystemConfig& config, RngStream& rng,
    const ProtocolOptions& options = {});

}  // namespace eia
