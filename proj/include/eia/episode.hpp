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
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eia/channel.hpp"
#include "eia/metrics.hpp"

namespace eia {

enum class PairingMode {
    kGenie,   // the second slot is constructed as an exact complement
    kSearch,  // slots are drawn i.i.d. and matched through the quantizer
};

enum class FeedbackKind {
    kCsi,        // receivers feed back the measured channel matrices
    kTimeIndex,  // receivers feed back only the slot indices (t1, t2)
};

// Channel-state feedback: the matrices of both paired slots.
struct CsiFeedback {
    ChannelMatrix h1;
    ChannelMatrix h2;
};

// Index-only feedback: enough for a transmitter that remembers its own past
// symbols, and exponentially cheaper than shipping coefficients.
struct TimeIndexFeedback {
    std::int64_t t1 = 0;
    std::int64_t t2 = 0;
};

// One receiver's processed-output feedback value.
struct OutputFeedbackValue {
    int user = 0;
    std::complex<double> value{0.0, 0.0};
};

// Processed-output feedback from all K receivers.
struct OutputFeedback {
    std::vector<OutputFeedbackValue> values;
};

// What the feedback link carries and how late it arrives. delay_slots is the
// number of slots between the observation and its availability at the
// transmitters; the retrospective phase cannot start earlier.
struct FeedbackMessage {
    std::variant<CsiFeedback, TimeIndexFeedback, OutputFeedback> payload;
    int delay_slots = 1;
};

// Knobs shared by the protocol drivers. Defaults reproduce the reference
// experiments.
struct ProtocolOptions {
    int delay_slots = 1;           // feedback latency, at least 1
    bool normalize_phase2 = false; // scale retransmissions to unit mean power
    double coeff_floor = 1e-6;     // below this, a divisor counts as zero
    double condition_limit = 1e8;  // abort threshold for linear solves
    std::int64_t search_horizon = 200000;  // pairing search budget in slots
    PairingScale genie_scale{};    // scale used by genie pairing
    QuantizerConfig quantizer{};   // grid used by search pairing

    void validate() const;
};

enum class AbortReason {
    kDegenerateChannel,  // a required coefficient fell below coeff_floor
    kIllConditioned,     // decoding system condition number over the limit
    kNoPairing,          // search exhausted its horizon without a match
};

std::string to_string(AbortReason reason);

// Message/slot accounting for one episode. The degrees-of-freedom ledger of
// a scheme is messages_decoded / slots_consumed.
struct DofLedger {
    std::string scheme;
    int num_users = 0;
    int messages_decoded = 0;
    int slots_consumed = 0;
    double mean_phase2_power = 0.0;  // average |X|^2 over retransmission slots
};

// Decoded pair of messages for one user plus the effective linear channel the
// estimates came through (used for rate evaluation).
struct DecodeResult {
    std::complex<double> x_t1_hat{0.0, 0.0};
    std::complex<double> x_t2_hat{0.0, 0.0};
    LinearObservationModel model;
};

// Outcome wrapper: either a completed episode payload or an abort reason,
// plus the ledger that applies either way.
template <typename Episode>
struct EpisodeOutcome {
    std::optional<Episode> episode;
    std::optional<AbortReason> abort;
    DofLedger ledger;

    bool completed() const { return episode.has_value(); }
};

}  // namespace eia
