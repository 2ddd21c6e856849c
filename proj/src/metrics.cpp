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

#include "eia/metrics.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eia {

namespace {

double log2_det_hermitian_pd(const Eigen::MatrixXcd& a) {
    // Symmetrize before factoring; the inputs are Hermitian up to rounding.
    const Eigen::MatrixXcd sym = 0.5 * (a + a.adjoint());
    Eigen::LLT<Eigen::MatrixXcd> llt(sym);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error(
            "model_rate: matrix is not positive definite");
    }
    const auto& l = llt.matrixLLT();
    double log2det = 0.0;
    for (Eigen::Index i = 0; i < sym.rows(); ++i) {
        log2det += 2.0 * std::log2(l(i, i).real());
    }
    return log2det;
}

}  // namespace

double model_rate_at(const LinearObservationModel& model, double input_power) {
    if (model.gain.rows() != model.noise_covariance.rows() ||
        model.noise_covariance.rows() != model.noise_covariance.cols()) {
        throw std::invalid_argument(
            "model_rate: gain and noise covariance shapes disagree");
    }
    if (model.slots_consumed < 1) {
        throw std::invalid_argument("model_rate: slots_consumed must be >= 1");
    }
    if (!(input_power >= 0.0)) {
        throw std::invalid_argument("model_rate: input power must be >= 0");
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(
        0.5 * (model.noise_covariance + model.noise_covariance.adjoint()));
    if (llt.info() != Eigen::Success) {
        throw std::domain_error(
            "model_rate: noise covariance is not positive definite");
    }
    const Eigen::MatrixXcd sinv_g = llt.solve(model.gain);
    const Eigen::Index n = model.gain.cols();
    const Eigen::MatrixXcd inner =
        Eigen::MatrixXcd::Identity(n, n) +
        input_power * model.gain.adjoint() * sinv_g;
    return log2_det_hermitian_pd(inner) / model.slots_consumed;
}

double model_rate(const LinearObservationModel& model) {
    return model_rate_at(model, model.input_power);
}

Eigen::MatrixXcd estimation_error_covariance(
    const LinearObservationModel& model) {
    if (model.gain.rows() != model.gain.cols()) {
        throw std::invalid_argument(
            "estimation_error_covariance: gain must be square");
    }
    const Eigen::MatrixXcd ginv =
        model.gain.partialPivLu().solve(Eigen::MatrixXcd::Identity(
            model.gain.rows(), model.gain.cols()));
    return ginv * model.noise_covariance * ginv.adjoint();
}

Rational make_rational(long long num, long long den) {
    if (den == 0) {
        throw std::invalid_argument("Rational: zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational{num, den};
}

double Rational::to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::str() const {
    if (den == 1) {
        return std::to_string(num);
    }
    return std::to_string(num) + "/" + std::to_string(den);
}

bool rational_less(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <
           static_cast<__int128>(b.num) * a.den;
}

DofFormulas dof_formulas(long long num_users) {
    if (num_users < 3 || num_users > 1000000000LL) {
        throw std::invalid_argument(
            "dof_formulas: num_users must lie in [3, 10^9]");
    }
    const long long k = num_users;
    const long long half_up = (k + 1) / 2;  // ceil(K / 2)
    DofFormulas out;
    out.proposed = make_rational(2 * k, k + 2);
    out.retro_csit = make_rational(k * k, k * k - 1);
    out.retro_outputfb = make_rational(half_up * k, half_up * (k - 1) + 1);
    out.baseline = make_rational(k, 2);
    return out;
}

std::vector<FigureRow> figure_data(long long k_min, long long k_max) {
    if (k_min < 3 || k_max < k_min) {
        throw std::invalid_argument("figure_data: need 3 <= k_min <= k_max");
    }
    std::vector<FigureRow> rows;
    rows.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (long long k = k_min; k <= k_max; ++k) {
        const DofFormulas f = dof_formulas(k);
        rows.push_back(FigureRow{k, f.proposed, f.retro_csit, f.retro_outputfb});
    }
    return rows;
}

double regress_slope(const std::vector<double>& snr_db,
                     const std::vector<double>& mean_sum_rate) {
    if (snr_db.size() < 2 || snr_db.size() != mean_sum_rate.size()) {
        throw std::invalid_argument(
            "regress_slope: need matching vectors with >= 2 points");
    }
    // Least squares of rate against log2(SNR).
    const std::size_t n = snr_db.size();
    double mean_x = 0.0;
    double mean_y = 0.0;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = snr_db[i] * std::log2(10.0) / 10.0;  // dB -> log2 scale
        mean_x += x[i];
        mean_y += mean_sum_rate[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (mean_sum_rate[i] - mean_y);
    }
    if (sxx <= 0.0) {
        throw std::invalid_argument("regress_slope: SNR points must differ");
    }
    return sxy / sxx;
}

SlopeEstimate dof_slope(const EpisodeModelSampler& sampler,
                        const std::vector<double>& snr_db, int episodes,
                        std::uint64_t seed) {
    if (snr_db.size() < 2) {
        throw std::invalid_argument("dof_slope: need at least two SNR points");
    }
    for (double s : snr_db) {
        if (s < 30.0) {
            throw std::invalid_argument(
                "dof_slope: slope estimation needs SNR points >= 30 dB");
        }
    }
    if (episodes < 1000) {
        throw std::invalid_argument("dof_slope: need at least 1000 episodes");
    }

    SlopeEstimate est;
    est.snr_db = snr_db;
    est.mean_sum_rate.assign(snr_db.size(), 0.0);

    std::vector<double> power(snr_db.size());
    for (std::size_t i = 0; i < snr_db.size(); ++i) {
        power[i] = std::pow(10.0, snr_db[i] / 10.0);
    }

    constexpr int kMaxAttemptsPerEpisode = 1000;
    for (int ep = 0; ep < episodes; ++ep) {
        std::optional<std::vector<LinearObservationModel>> models;
        for (int attempt = 0; attempt < kMaxAttemptsPerEpisode; ++attempt) {
            RngStream rng = RngStream::substream(
                seed, static_cast<std::uint64_t>(ep),
                static_cast<std::uint64_t>(attempt));
            models = sampler(rng);
            if (models) {
                break;
            }
            ++est.episodes_discarded;
        }
        if (!models) {
            throw std::runtime_error(
                "dof_slope: episode kept aborting after 1000 redraws");
        }
        for (std::size_t i = 0; i < power.size(); ++i) {
            double sum_rate = 0.0;
            for (const LinearObservationModel& m : *models) {
                sum_rate += model_rate_at(m, power[i]);
            }
            est.mean_sum_rate[i] += sum_rate;
        }
        ++est.episodes_completed;
    }
    for (double& r : est.mean_sum_rate) {
        r /= static_cast<double>(est.episodes_completed);
    }
    est.slope = regress_slope(est.snr_db, est.mean_sum_rate);
    return est;
}

}  // namespace eia
