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

// Reference scheme: every transmitter repeats the same symbol on both slots
// of a complementary pair, so each receiver can cancel all interference by
// combining the two observations. Each user moves 1 message in 2 slots.

enum class SymbolKind { kTransmit, kReceive };

struct SymbolVector {
    Eigen::VectorXcd values;  // one entry per user
    SymbolKind kind = SymbolKind::kTransmit;
};

struct ReceivedPair {
    SymbolVector y1;  // observations at t1, one per receiver
    SymbolVector y2;  // observations at t2
    PairedChannels pair;
    double noise_variance = 0.0;
};

// Message symbols, i.i.d. CN(0, power).
SymbolVector sample_transmit_symbols(const SystemConfig& config, RngStream& rng);

// Sends x over both slots of the pair and adds fresh noise per slot.
// Preconditions: x is a transmit vector of matching size.
ReceivedPair transmit_pair(const SymbolVector& x, const PairedChannels& pair,
                           const SystemConfig& config, RngStream& rng);

// The interference-cancelling statistic of one receiver and its noise power:
//   value = Y_k(t1) + Y_k(t2) / c,
//   noise_variance = N0 * (1 + 1 / |c|^2).
// When the pair is exactly complementary the value collapses to
// 2 H_kk(t1) X_k + combined noise; interference from all other users is gone.
struct CombinedObservation {
    cplx value{0.0, 0.0};
    double noise_variance = 0.0;
};

CombinedObservation combine_received(const ReceivedPair& received, int user);

// Effective single-letter channel of one user after combining, charged two
// slots. The gain is the own-signal coefficient of the combined statistic,
// H_kk(t1) + H_kk(t2) / c (equal to 2 H_kk(t1) for an exact complement).
LinearObservationModel baseline_user_model(const PairedChannels& pair,
                                           const SystemConfig& config,
                                           int user);

// Gaussian-input rate of that channel in bits per slot:
//   (1/2) log2(1 + |gain|^2 P / (N0 (1 + 1/|c|^2))).
double baseline_rate(const PairedChannels& pair, const SystemConfig& config,
                     int user);

struct BaselineEpisode {
    PairedChannels pair;
    SymbolVector x;
    ReceivedPair received;
    Eigen::VectorXcd x_hat;  // zero-forcing estimates, one per user
    double input_power = 1.0;
    double noise_variance = 0.0;
    std::vector<TransmitRecord> transmit_log;
};

// One full baseline episode: pair the slots (genie or quantized search),
// transmit, combine, estimate. Aborts with kDegenerateChannel when a direct
// gain is too small to divide by, or kNoPairing when the search runs dry.
EpisodeOutcome<BaselineEpisode> run_episode_baseline(
    const SystemConfig& config, PairingMode mode, RngStream& rng,
    const ProtocolOptions& options = {});

}  // namespace eia
