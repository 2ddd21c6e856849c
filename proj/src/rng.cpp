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

#include "eia/rng.hpp"

#include <cmath>
#include <numbers>

namespace eia {

namespace {

// splitmix64 finalizer; decorrelates nearby seed/stream ids before they enter
// the mt19937_64 state.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

RngStream RngStream::substream(std::uint64_t seed, std::uint64_t stream_id,
                               std::uint64_t substream_id) {
    std::uint64_t s = mix(seed);
    s = mix(s ^ mix(stream_id));
    s = mix(s ^ mix(substream_id + 0x632be59bd9b4e019ULL));
    return RngStream(s);
}

double RngStream::uniform() {
    // Top 53 bits, shifted into (0, 1] so -log(u) never overflows.
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::uniform_co() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::complex<double> RngStream::gaussian() {
    const double u1 = uniform();
    const double u2 = uniform_co();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::uint64_t RngStream::raw() { return engine_(); }

}  // namespace eia
