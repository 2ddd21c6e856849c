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

#include <cstdint>
#include <string>
#include <vector>

namespace eia {

// One protocol invariant checked end to end.
struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;  // what was measured, for the human reading the log
};

// Runs the full invariant suite: formula identities, noiseless exactness of
// all three schemes, message/slot accounting, equivalence of the two
// feedback kinds, transmitter blindness and causality, pairing detection,
// quantizer geometry, and bit determinism. Cheap enough for CI.
std::vector<PropertyResult> run_verification_suite(std::uint64_t seed);

}  // namespace eia
