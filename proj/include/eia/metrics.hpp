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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eia/rng.hpp"

namespace eia {

// Effective linear channel seen by one decoder after an episode:
//   y = G x + n,  n ~ CN(0, noise_covariance),  x i.i.d. CN(0, input_power).
// slots_consumed is the episode cost in channel uses charged to these
// symbols, so the achievable rate of the model is per-slot.
struct LinearObservationModel {
    Eigen::MatrixXcd gain;              // G, observations x symbols
    Eigen::MatrixXcd noise_covariance;  // Hermitian positive definite
    double input_power = 1.0;
    int slots_consumed = 1;
};

// Gaussian-input mutual information of the model in bits per slot:
//   log2 det(I + P * G^H Sigma^-1 G) / slots_consumed.
// Throws std::domain_error when the covariance is not positive definite and
// std::invalid_argument on shape mismatches.
double model_rate(const LinearObservationModel& model);

// Same, with the symbol power replaced by `input_power`. Lets one episode's
// model (built at unit noise) be swept across SNR points with common
// randomness.
double model_rate_at(const LinearObservationModel& model, double input_power);

// Covariance of (x_hat - x) for the zero-forcing estimate x_hat = G^-1 y.
// Requires a square invertible gain.
Eigen::MatrixXcd estimation_error_covariance(const LinearObservationModel& model);

// Exact nonnegative rational with canonical (reduced, positive-denominator)
// representation. Large enough for the formula tables up to K = 10^9.
struct Rational {
    long long num = 0;
    long long den = 1;

    double to_double() const;
    std::string str() const;

    friend bool operator==(const Rational& a, const Rational& b) = default;
};

Rational make_rational(long long num, long long den);
bool rational_less(const Rational& a, const Rational& b);

// Degrees of freedom guaranteed by each scheme for K users, as exact
// rationals:
//   proposed        2K / (K + 2)        (delayed CSIT / time-index feedback)
//   retro_csit      K^2 / (K^2 - 1)     (prior retrospective scheme, CSIT)
//   retro_outputfb  ceil(K/2) K / (ceil(K/2)(K-1) + 1)
//   baseline        K / 2               (full CSIT ergodic alignment)
struct DofFormulas {
    Rational proposed;
    Rational retro_csit;
    Rational retro_outputfb;
    Rational baseline;
};

// Throws std::invalid_argument unless 3 <= num_users <= 10^9.
DofFormulas dof_formulas(long long num_users);

struct FigureRow {
    long long num_users = 0;
    Rational proposed;
    Rational retro_csit;
    Rational retro_outputfb;
};

// Formula table over a K range, for plotting scheme comparisons.
std::vector<FigureRow> figure_data(long long k_min, long long k_max);

// Produces the per-user observation models of one episode, drawn with unit
// noise power so SNR can be swept afterwards. nullopt means the episode
// aborted and should be redrawn.
using EpisodeModelSampler = std::function<
    std::optional<std::vector<LinearObservationModel>>(RngStream& rng)>;

struct SlopeEstimate {
    std::vector<double> snr_db;
    std::vector<double> mean_sum_rate;  // bits per slot, one per SNR point
    double slope = 0.0;                 // least-squares slope vs log2(SNR)
    int episodes_completed = 0;
    int episodes_discarded = 0;         // aborted draws that were replaced
};

// Monte Carlo high-SNR slope of the sum rate: runs `episodes` episodes, sums
// the per-user model rates, and regresses the mean sum rate on log2(SNR).
// The same episodes are evaluated at every SNR point (common random
// numbers), so the regression noise nearly cancels.
// Preconditions: at least two SNR points, all at 30 dB or more, and at least
// 1000 episodes. Violations throw std::invalid_argument.
SlopeEstimate dof_slope(const EpisodeModelSampler& sampler,
                        const std::vector<double>& snr_db, int episodes,
                        std::uint64_t seed);

// Pure regression helper shared with dof_slope (exposed for tests).
double regress_slope(const std::vector<double>& snr_db,
                     const std::vector<double>& mean_sum_rate);

}  // namespace eia
