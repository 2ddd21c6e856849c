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

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace eia {

// Information sources a transmitted value may depend on. Values combine
// through arithmetic, so the flags accumulate by OR. The point of tracking
// them is a structural audit: under delayed feedback, a transmitter must
// never emit a value whose computation touched current channel coefficients.
enum Source : unsigned {
    kSourceConstant = 0u,
    kSourceOwnMessage = 1u << 0,  // the transmitter's own message symbols
    kSourceFeedback = 1u << 1,    // anything delivered over a feedback link
    kSourceChannel = 1u << 2,     // channel coefficients observed directly
    kSourceNoise = 1u << 3,       // receiver noise
};

// A complex value bundled with the OR of the sources that produced it.
struct Tagged {
    std::complex<double> value{0.0, 0.0};
    unsigned sources = kSourceConstant;

    friend Tagged operator+(const Tagged& a, const Tagged& b) {
        return {a.value + b.value, a.sources | b.sources};
    }
    friend Tagged operator-(const Tagged& a, const Tagged& b) {
        return {a.value - b.value, a.sources | b.sources};
    }
    friend Tagged operator*(const Tagged& a, const Tagged& b) {
        return {a.value * b.value, a.sources | b.sources};
    }
    friend Tagged operator/(const Tagged& a, const Tagged& b) {
        return {a.value / b.value, a.sources | b.sources};
    }
};

// Crossing a feedback link erases the payload's internal history: from the
// transmitter's point of view the delivered number is just feedback, whatever
// the receiver computed it from. The delivery delay is audited separately
// through TransmitRecord.
inline Tagged deliver_as_feedback(const Tagged& payload) {
    return {payload.value, kSourceFeedback};
}

// Audit record of one transmission. newest_information_time is the time
// index of the most recent observation the value depends on (nullopt when it
// depends on none), which lets a checker confirm the feedback delay was
// respected: slot >= newest_information_time + delay.
struct TransmitRecord {
    std::int64_t slot = 0;
    int transmitter = 0;
    std::complex<double> value{0.0, 0.0};
    unsigned sources = kSourceConstant;
    std::optional<std::int64_t> newest_information_time;
};

// True when no transmitted value depended on channel coefficients directly
// (feedback-delivered values are fine; that is the whole point).
inline bool transmit_log_is_blind(const std::vector<TransmitRecord>& log) {
    for (const TransmitRecord& rec : log) {
        if (rec.sources & kSourceChannel) {
            return false;
        }
    }
    return true;
}

// True when every transmission respected the feedback latency: anything that
// depends on an observation from time t may air no earlier than t + delay.
inline bool transmit_log_is_causal(const std::vector<TransmitRecord>& log,
                                   int delay_slots) {
    for (const TransmitRecord& rec : log) {
        if (rec.newest_information_time &&
            rec.slot < *rec.newest_information_time + delay_slots) {
            return false;
        }
    }
    return true;
}

}  // namespace eia
