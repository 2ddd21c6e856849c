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

#include "eia/output_feedback.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "eia/pairing_driver.hpp"

namespace eia {

namespace {

double phase2_scale(bool normalized) {
    // F_k - 2 X_k(t2) carries the own difference plus cross terms; its mean
    // power works out to roughly 2P as well, and the optional normalization
    // rescales by the same 1/sqrt(2) convention as the CSIT scheme.
    return normalized ? 1.0 / std::sqrt(2.0) : 1.0;
}

}  // namespace

std::optional<OutputFeedbackValue> build_output_feedback(
    const EpisodeOutputFb& episode, int user, double coeff_floor) {
    const int k = episode.pair.first.num_users();
    if (user < 0 || user >= k) {
        throw std::invalid_argument("build_output_feedback: user out of range");
    }
    const cplx direct = episode.pair.first.h(user, user);
    if (std::abs(direct) < coeff_floor) {
        return std::nullopt;
    }
    const cplx combined = episode.y_t1(user) +
                          episode.y_t2(user) / episode.pair.scale.value;
    return OutputFeedbackValue{user, combined / direct};
}

Tagged phase2_transmit_outputfb(const Tagged& delivered_feedback, cplx x_t2,
                                bool normalized) {
    const Tagged own{x_t2, kSourceOwnMessage};
    const Tagged two{cplx{2.0, 0.0}, kSourceConstant};
    const Tagged scale{cplx{phase2_scale(normalized), 0.0}, kSourceConstant};
    return (delivered_feedback - two * own) * scale;
}

std::optional<DifferenceSystem> solve_difference_system(
    const EpisodeOutputFb& episode, int receiver,
    const ProtocolOptions& options) {
    options.validate();
    const int k = episode.pair.first.num_users();
    if (receiver < 0 || receiver >= k) {
        throw std::invalid_argument(
            "solve_difference_system: receiver out of range");
    }
    const Eigen::MatrixXcd& h1 = episode.pair.first.h;
    const double s = phase2_scale(episode.normalized_phase2);

    DifferenceSystem sys;
    sys.matrix.resize(k, k);
    sys.rhs.resize(k);
    for (int row = 0; row < k; ++row) {
        const cplx direct = h1(row, row);
        if (std::abs(direct) < options.coeff_floor) {
            return std::nullopt;
        }
        for (int col = 0; col < k; ++col) {
            sys.matrix(row, col) = col == row ? cplx{1.0, 0.0}
                                              : h1(row, col) / direct;
        }
        const cplx gain = episode.phase2_channels[row].h(receiver, row);
        if (std::abs(gain) < options.coeff_floor) {
            return std::nullopt;
        }
        sys.rhs(row) = episode.phase2_received(receiver, row) / (s * gain);
    }

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.matrix);
    const double smin = svd.singularValues()(k - 1);
    const double smax = svd.singularValues()(0);
    sys.condition_number =
        smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(sys.condition_number <= options.condition_limit)) {
        return std::nullopt;
    }
    sys.solution = sys.matrix.partialPivLu().solve(sys.rhs);
    return sys;
}

std::optional<DecodeResult> decode_outputfb(const EpisodeOutputFb& episode,
                                            int receiver,
                                            const ProtocolOptions& options) {
    const int k = episode.pair.first.num_users();
    auto sys = solve_difference_system(episode, receiver, options);
    if (!sys) {
        return std::nullopt;
    }
    const Eigen::MatrixXcd& h1 = episode.pair.first.h;
    const cplx c = episode.pair.scale.value;
    const double s = phase2_scale(episode.normalized_phase2);

    cplx isolated = episode.y_t1(receiver) + episode.y_t2(receiver) / c;
    for (int m = 0; m < k; ++m) {
        if (m != receiver) {
            isolated -= h1(receiver, m) * sys->solution(m);
        }
    }
    const cplx sum_hat = isolated / h1(receiver, receiver);

    DecodeResult result;
    result.x_t1_hat = 0.5 * (sum_hat + sys->solution(receiver));
    result.x_t2_hat = 0.5 * (sum_hat - sys->solution(receiver));

    // Noise accounting. The rhs of the difference system is
    //   A d + w + v,   w_m = (Z_m(t1) + Z_m(t2)/c) / H_mm(t1),
    //                  v_m = Z_j(t2+m) / (s H_jm(t2+m)),
    // so the difference estimates carry A^{-1}(w + v), and the isolated
    // statistic adds the receiver's own phase-1 noise back in. Everything is
    // linear in the 3K independent slot noises
    //   [Z_1..K(t1), Z_1..K(t2), Z_j(t2+1..t2+K)],
    // giving covariance N0 * L * L^H for the coefficient rows L below.
    Eigen::MatrixXcd w_coeff = Eigen::MatrixXcd::Zero(k, 3 * k);
    for (int m = 0; m < k; ++m) {
        w_coeff(m, m) = 1.0 / h1(m, m);
        w_coeff(m, k + m) = 1.0 / (c * h1(m, m));
        w_coeff(m, 2 * k + m) =
            1.0 / (s * episode.phase2_channels[m].h(receiver, m));
    }
    const Eigen::MatrixXcd err_coeff = sys->matrix.partialPivLu().solve(w_coeff);

    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(2, 3 * k);
    coeff.row(0) = err_coeff.row(receiver);
    coeff(1, receiver) += 1.0;
    coeff(1, k + receiver) += 1.0 / c;
    for (int m = 0; m < k; ++m) {
        if (m != receiver) {
            coeff.row(1) -= h1(receiver, m) * err_coeff.row(m);
        }
    }

    LinearObservationModel model;
    model.gain.resize(2, 2);
    model.gain(0, 0) = 1.0;
    model.gain(0, 1) = -1.0;
    model.gain(1, 0) = h1(receiver, receiver);
    model.gain(1, 1) = h1(receiver, receiver);
    model.noise_covariance =
        episode.noise_variance * (coeff * coeff.adjoint());
    model.input_power = episode.input_power;
    model.slots_consumed = k + 2;
    result.model = std::move(model);
    return result;
}

namespace {

EpisodeOutcome<EpisodeOutputFb> run_outputfb_with_pair(
    const PairedChannels& pair,
    const std::vector<ChannelMatrix>* fixed_phase2,
    const SystemConfig& config, RngStream& rng,
    const ProtocolOptions& options) {
    const int k = config.num_users;

    EpisodeOutcome<EpisodeOutputFb> out;
    out.ledger.scheme = "delayed_output_fb";
    out.ledger.num_users = k;
    out.ledger.messages_decoded = 2 * k;
    out.ledger.slots_consumed = k + 2;

    EpisodeOutputFb ep;
    ep.pair = pair;
    ep.input_power = config.power;
    ep.noise_variance = config.noise_variance;
    ep.normalized_phase2 = options.normalize_phase2;

    const double symbol_scale = std::sqrt(config.power);
    const double noise_scale = std::sqrt(config.noise_variance);
    ep.x_t1.resize(k);
    ep.x_t2.resize(k);
    for (int i = 0; i < k; ++i) {
        ep.x_t1(i) = symbol_scale * rng.gaussian();
    }
    for (int i = 0; i < k; ++i) {
        ep.x_t2(i) = symbol_scale * rng.gaussian();
    }

    ep.y_t1 = ep.pair.first.h * ep.x_t1;
    ep.y_t2 = ep.pair.second.h * ep.x_t2;
    for (int j = 0; j < k; ++j) {
        ep.y_t1(j) += noise_scale * rng.gaussian();
    }
    for (int j = 0; j < k; ++j) {
        ep.y_t2(j) += noise_scale * rng.gaussian();
    }

    for (int i = 0; i < k; ++i) {
        ep.transmit_log.push_back(TransmitRecord{
            ep.pair.t1(), i, ep.x_t1(i), kSourceOwnMessage, std::nullopt});
    }
    for (int i = 0; i < k; ++i) {
        ep.transmit_log.push_back(TransmitRecord{
            ep.pair.t2(), i, ep.x_t2(i), kSourceOwnMessage, std::nullopt});
    }

    // Each receiver computes its feedback value from its own observations.
    OutputFeedback fb;
    fb.values.reserve(k);
    for (int user = 0; user < k; ++user) {
        auto value = build_output_feedback(ep, user, options.coeff_floor);
        if (!value) {
            out.abort = AbortReason::kDegenerateChannel;
            return out;
        }
        fb.values.push_back(*value);
    }
    ep.feedback = FeedbackMessage{fb, options.delay_slots};

    ep.phase2_channels.reserve(k);
    ep.phase2_received.resize(k, k);
    double power_sum = 0.0;
    for (int user = 0; user < k; ++user) {
        const std::int64_t slot = ep.pair.t2() + options.delay_slots + user;
        if (fixed_phase2 != nullptr) {
            ep.phase2_channels.push_back((*fixed_phase2)[user]);
        } else {
            ep.phase2_channels.push_back(sample_channel(config, rng, slot));
        }
        // The receiver computed F_k from its observations with CSIR, so the
        // pre-delivery value depends on channel and noise; crossing the
        // feedback link is what makes it legal input for a transmitter.
        const Tagged delivered = deliver_as_feedback(
            Tagged{fb.values[user].value, kSourceChannel | kSourceNoise});
        const Tagged sent = phase2_transmit_outputfb(
            delivered, ep.x_t2(user), ep.normalized_phase2);
        ep.transmit_log.push_back(TransmitRecord{
            slot, user, sent.value, sent.sources, ep.pair.t2()});
        power_sum += std::norm(sent.value);
        for (int j = 0; j < k; ++j) {
            ep.phase2_received(j, user) =
                ep.phase2_channels.back().h(j, user) * sent.value +
                noise_scale * rng.gaussian();
        }
    }
    out.ledger.mean_phase2_power = power_sum / k;

    out.episode = std::move(ep);
    return out;
}

}  // namespace

EpisodeOutcome<EpisodeOutputFb> run_episode_outputfb(
    const SystemConfig& config, PairingMode mode, RngStream& rng,
    const ProtocolOptions& options) {
    config.validate();
    options.validate();
    auto pair = acquire_pairing(config, mode, rng, options);
    if (!pair) {
        EpisodeOutcome<EpisodeOutputFb> out;
        out.ledger.scheme = "delayed_output_fb";
        out.ledger.num_users = config.num_users;
        out.ledger.messages_decoded = 2 * config.num_users;
        out.ledger.slots_consumed = config.num_users + 2;
        out.abort = AbortReason::kNoPairing;
        return out;
    }
    return run_outputfb_with_pair(*pair, nullptr, config, rng, options);
}

EpisodeOutcome<EpisodeOutputFb> run_episode_outputfb_on(
    const PairedChannels& pair,
    const std::vector<ChannelMatrix>& phase2_channels,
    const SystemConfig& config, RngStream& rng,
    const ProtocolOptions& options) {
    config.validate();
    options.validate();
    if (static_cast<int>(phase2_channels.size()) != config.num_users) {
        throw std::invalid_argument(
            "run_episode_outputfb_on: need one phase-2 channel per user");
    }
    return run_outputfb_with_pair(pair, &phase2_channels, config, rng, options);
}

}  // namespace eia
