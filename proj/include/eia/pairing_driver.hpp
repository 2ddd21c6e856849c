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

#include <optional>

#include "eia/channel.hpp"
#include "eia/episode.hpp"

namespace eia {

// Obtains the complementary slot pair every scheme starts from. Genie mode
// draws H(t1) and manufactures the exact complement at t2 = t1 + 1; search
// mode streams i.i.d. draws through the quantized matcher until one lands
// (or the horizon runs out).
std::optional<PairedChannels> acquire_pairing(const SystemConfig& config,
                                              PairingMode mode, RngStream& rng,
                                              const ProtocolOptions& options);

}  // namespace eia
