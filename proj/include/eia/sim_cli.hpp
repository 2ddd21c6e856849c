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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eia/episode.hpp"

namespace eia {

enum class Scheme {
    kBaseline,
    kDelayedCsit,
    kDelayedTimeIndex,
    kDelayedOutputFb,
    kFormulas,
};

std::string to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(const std::string& name);

// Everything one `run` invocation needs. Runs cover a K range (a single K is
// k_min == k_max); simulation schemes sweep the SNR list with common random
// numbers per episode.
struct RunConfig {
    Scheme scheme = Scheme::kDelayedCsit;
    int k_min = 3;
    int k_max = 3;
    std::vector<double> snr_db;
    int episodes = 1000;
    PairingMode pairing = PairingMode::kGenie;
    bool noiseless = false;
    std::uint64_t seed = 1;
    std::string output_path = "results.csv";
    ProtocolOptions options;

    void validate() const;
};

// Executes the scenario and writes a CSV to config.output_path. The file
// starts with '#' comment lines echoing the configuration, then a header row
// and data rows with doubles at 12 significant digits. Identical configs and
// seeds produce byte-identical files. Returns 0 on success.
int run_scenario(const RunConfig& config);

// Same, writing the CSV to a stream (used by tests and run_scenario alike).
void run_scenario_to(const RunConfig& config, std::ostream& out);

// Runs the invariant suite, printing one [PASS]/[FAIL] line per property to
// `out`. Returns the number of failed properties.
int run_verify(std::uint64_t seed, std::ostream& out);

}  // namespace eia
