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

#include "eia/episode.hpp"

#include <stdexcept>

#include "eia/pairing_driver.hpp"

namespace eia {

void ProtocolOptions::validate() const {
    if (delay_slots < 1) {
        throw std::invalid_argument(
            "ProtocolOptions: delay_slots must be at least 1");
    }
    if (!(coeff_floor > 0.0)) {
        throw std::invalid_argument(
            "ProtocolOptions: coeff_floor must be positive");
    }
    if (!(condition_limit > 1.0)) {
        throw std::invalid_argument(
            "ProtocolOptions: condition_limit must exceed 1");
    }
    if (search_horizon < 1) {
        throw std::invalid_argument(
            "ProtocolOptions: search_horizon must be at least 1");
    }
    if (std::abs(genie_scale.value) <= 0.0) {
        throw std::invalid_argument(
            "ProtocolOptions: genie_scale must be nonzero");
    }
    quantizer.validate();
}

std::string to_string(AbortReason reason) {
    switch (reason) {
        case AbortReason::kDegenerateChannel:
            return "degenerate_channel";
        case AbortReason::kIllConditioned:
            return "ill_conditioned";
        case AbortReason::kNoPairing:
            return "no_pairing";
    }
    return "unknown";
}

std::optional<PairedChannels> acquire_pairing(const SystemConfig& config,
                                              PairingMode mode, RngStream& rng,
                                              const ProtocolOptions& options) {
    if (mode == PairingMode::kGenie) {
        ChannelMatrix h1 = sample_channel(config, rng, 0);
        PairedChannels pair;
        pair.second = genie_pair(h1, options.genie_scale, 1);
        pair.first = std::move(h1);
        pair.scale = options.genie_scale;
        return pair;
    }
    return find_pairing(
        [&](std::int64_t t) { return sample_channel(config, rng, t); },
        options.quantizer, options.search_horizon);
}

}  // namespace eia
