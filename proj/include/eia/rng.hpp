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
#include <random>

namespace eia {

// Deterministic random stream used by every stochastic component. Complex
// Gaussian draws go through an explicit Box-Muller transform instead of
// std::normal_distribution, so the value sequence depends only on the engine
// state and stays reproducible across standard library implementations.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    // Derives an independent stream from (seed, stream_id [, substream_id]).
    // Streams with distinct ids never share engine state, which keeps
    // per-episode draws independent of how many draws earlier episodes used.
    static RngStream substream(std::uint64_t seed, std::uint64_t stream_id,
                               std::uint64_t substream_id = 0);

    // Uniform on (0, 1]. The lower bound is open so log(u) is always finite.
    double uniform();

    // Uniform on [0, 1).
    double uniform_co();

    // One sample of the standard circularly-symmetric complex Gaussian
    // CN(0, 1): E[z] = 0, E[|z|^2] = 1.
    std::complex<double> gaussian();

    std::uint64_t raw();

  private:
    std::mt19937_64 engine_;
};

}  // namespace eia
