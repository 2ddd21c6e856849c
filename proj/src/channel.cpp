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

#include "eia/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace eia {

namespace {

constexpr double kLatticeTol = 1e-9;

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= kLatticeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

void SystemConfig::validate() const {
    if (num_users < 3) {
        throw std::invalid_argument("SystemConfig: num_users must be at least 3");
    }
    if (!(power > 0.0)) {
        throw std::invalid_argument("SystemConfig: power must be positive");
    }
    if (!(noise_variance >= 0.0)) {
        throw std::invalid_argument("SystemConfig: noise_variance must be nonnegative");
    }
}

void QuantizerConfig::validate() const {
    if (!(magnitude_step > 0.0)) {
        throw std::invalid_argument("QuantizerConfig: magnitude_step must be positive");
    }
    if (phase_bins < 4) {
        throw std::invalid_argument("QuantizerConfig: phase_bins must be at least 4");
    }
    if (!(magnitude_cap > magnitude_step)) {
        throw std::invalid_argument(
            "QuantizerConfig: magnitude_cap must exceed magnitude_step");
    }
    if (scale_candidates.empty()) {
        throw std::invalid_argument(
            "QuantizerConfig: scale_candidates must not be empty");
    }
    for (const PairingScale& c : scale_candidates) {
        if (std::abs(c.value) <= 0.0) {
            throw std::invalid_argument(
                "QuantizerConfig: scale candidates must be nonzero");
        }
    }
}

Eigen::MatrixXcd flip_off_diagonal(const Eigen::MatrixXcd& h) {
    Eigen::MatrixXcd out = -h;
    out.diagonal() = h.diagonal();
    return out;
}

ChannelMatrix sample_channel(const SystemConfig& config, RngStream& rng,
                             std::int64_t time_index) {
    config.validate();
    const int k = config.num_users;
    ChannelMatrix out;
    out.h.resize(k, k);
    out.time_index = time_index;
    for (int row = 0; row < k; ++row) {
        for (int col = 0; col < k; ++col) {
            out.h(row, col) = rng.gaussian();
        }
    }
    return out;
}

ChannelMatrix genie_pair(const ChannelMatrix& h1, const PairingScale& scale,
                         std::int64_t time_index) {
    if (std::abs(scale.value) <= 0.0) {
        throw std::invalid_argument("genie_pair: scale must be nonzero");
    }
    ChannelMatrix out;
    out.h = scale.value * flip_off_diagonal(h1.h);
    out.time_index = time_index;
    return out;
}

std::optional<PairingScale> is_complementary_pair(const ChannelMatrix& h1,
                                                  const ChannelMatrix& h2,
                                                  double tolerance,
                                                  double coeff_floor) {
    if (h1.h.rows() != h2.h.rows() || h1.h.cols() != h2.h.cols()) {
        throw std::invalid_argument(
            "is_complementary_pair: matrices must have equal dimensions");
    }
    if (std::abs(h1.h(0, 0)) < coeff_floor) {
        return std::nullopt;
    }
    const cplx c = h2.h(0, 0) / h1.h(0, 0);
    if (std::abs(c) < coeff_floor) {
        return std::nullopt;
    }
    const Eigen::MatrixXcd expected = c * flip_off_diagonal(h1.h);
    for (Eigen::Index row = 0; row < h1.h.rows(); ++row) {
        for (Eigen::Index col = 0; col < h1.h.cols(); ++col) {
            if (std::abs(h2.h(row, col) - expected(row, col)) > tolerance) {
                return std::nullopt;
            }
        }
    }
    return PairingScale{c};
}

Quantizer::Quantizer(QuantizerConfig config) : config_(std::move(config)) {
    config_.validate();
    // Largest index whose representative i * step stays strictly below the
    // cap; anything rounding higher belongs to the cap cell. Keeping the cap
    // representative off the regular grid makes cell values unique.
    const double ratio = config_.magnitude_cap / config_.magnitude_step;
    max_mag_index_ = static_cast<std::int32_t>(std::ceil(ratio - kLatticeTol)) - 1;
    if (max_mag_index_ < 1) {
        max_mag_index_ = 1;  // cap > step guarantees at least one regular band
    }
}

void Quantizer::magnitude_band(std::int32_t mag_idx, double* r_low,
                               double* r_high) const {
    const double s = config_.magnitude_step;
    if (mag_idx == 0) {
        *r_low = 0.0;
        *r_high = 0.5 * s;
    } else if (mag_idx <= max_mag_index_) {
        *r_low = (mag_idx - 0.5) * s;
        *r_high = (mag_idx + 0.5) * s;
    } else {
        *r_low = (max_mag_index_ + 0.5) * s;
        *r_high = std::numeric_limits<double>::infinity();
    }
}

QuantizedEntry Quantizer::quantize_entry(cplx value) const {
    const double mag = std::abs(value);
    const double s = config_.magnitude_step;
    std::int64_t idx = std::llround(mag / s);
    if (idx == 0) {
        return QuantizedEntry{0, 0};
    }
    const int bins = config_.phase_bins;
    const double sector = 2.0 * std::numbers::pi / bins;
    std::int64_t p = std::llround(std::arg(value) / sector);
    p = ((p % bins) + bins) % bins;
    if (idx > max_mag_index_) {
        idx = cap_index();
    }
    return QuantizedEntry{static_cast<std::int32_t>(idx),
                          static_cast<std::int32_t>(p)};
}

cplx Quantizer::cell_value(const QuantizedEntry& entry) const {
    if (entry.mag_idx == 0) {
        return {0.0, 0.0};
    }
    const double mag = entry.mag_idx >= cap_index()
                           ? config_.magnitude_cap
                           : entry.mag_idx * config_.magnitude_step;
    const double angle =
        2.0 * std::numbers::pi * entry.phase_idx / config_.phase_bins;
    return std::polar(mag, angle);
}

std::optional<QuantizedEntry> Quantizer::cell_of_lattice_value(cplx value) const {
    const double mag = std::abs(value);
    if (mag <= kLatticeTol) {
        return QuantizedEntry{0, 0};
    }
    std::int32_t mag_idx;
    if (nearly_equal(mag, config_.magnitude_cap)) {
        mag_idx = cap_index();
    } else {
        const std::int64_t idx = std::llround(mag / config_.magnitude_step);
        if (idx < 1 || idx > max_mag_index_ ||
            !nearly_equal(mag, static_cast<double>(idx) * config_.magnitude_step)) {
            return std::nullopt;
        }
        mag_idx = static_cast<std::int32_t>(idx);
    }
    const int bins = config_.phase_bins;
    const double sector = 2.0 * std::numbers::pi / bins;
    std::int64_t p = std::llround(std::arg(value) / sector);
    p = ((p % bins) + bins) % bins;
    const QuantizedEntry entry{mag_idx, static_cast<std::int32_t>(p)};
    if (std::abs(cell_value(entry) - value) > kLatticeTol * (1.0 + mag)) {
        return std::nullopt;
    }
    return entry;
}

double Quantizer::cell_probability(const QuantizedEntry& entry) const {
    double r_low = 0.0;
    double r_high = 0.0;
    magnitude_band(entry.mag_idx, &r_low, &r_high);
    // |z|^2 of a CN(0,1) draw is Exp(1), so P(|z| in [a, b)) =
    // exp(-a^2) - exp(-b^2); the phase is independent and uniform.
    const double upper =
        std::isinf(r_high) ? 0.0 : std::exp(-r_high * r_high);
    const double band = std::exp(-r_low * r_low) - upper;
    if (entry.mag_idx == 0) {
        return band;
    }
    return band / config_.phase_bins;
}

cplx Quantizer::sample_in_cell(const QuantizedEntry& entry,
                               RngStream& rng) const {
    double r_low = 0.0;
    double r_high = 0.0;
    magnitude_band(entry.mag_idx, &r_low, &r_high);
    const double a = std::exp(-r_low * r_low);
    const double b = std::isinf(r_high) ? 0.0 : std::exp(-r_high * r_high);
    // Inverse-CDF draw of the Rayleigh magnitude restricted to [r_low,
    // r_high). uniform() is in (0, 1], so the log argument stays in (b, a].
    const double u = rng.uniform();
    const double radius = std::sqrt(-std::log(b + (a - b) * u));
    double angle;
    if (entry.mag_idx == 0) {
        angle = 2.0 * std::numbers::pi * rng.uniform_co();
    } else {
        const double sector = 2.0 * std::numbers::pi / config_.phase_bins;
        angle = sector * (entry.phase_idx + rng.uniform_co() - 0.5);
    }
    return std::polar(radius, angle);
}

ChannelMatrix quantize(const ChannelMatrix& h, const QuantizerConfig& config) {
    const Quantizer quantizer(config);
    ChannelMatrix out;
    out.h.resize(h.h.rows(), h.h.cols());
    out.time_index = h.time_index;
    for (Eigen::Index row = 0; row < h.h.rows(); ++row) {
        for (Eigen::Index col = 0; col < h.h.cols(); ++col) {
            out.h(row, col) =
                quantizer.cell_value(quantizer.quantize_entry(h.h(row, col)));
        }
    }
    return out;
}

QuantizedKey quantized_key(const ChannelMatrix& h,
                           const QuantizerConfig& config) {
    const Quantizer quantizer(config);
    QuantizedKey key;
    key.reserve(static_cast<std::size_t>(h.h.size()) * 2);
    for (Eigen::Index row = 0; row < h.h.rows(); ++row) {
        for (Eigen::Index col = 0; col < h.h.cols(); ++col) {
            const QuantizedEntry entry = quantizer.quantize_entry(h.h(row, col));
            key.push_back(entry.mag_idx);
            key.push_back(entry.phase_idx);
        }
    }
    return key;
}

std::size_t PairingSearch::KeyHash::operator()(const QuantizedKey& key) const {
    // FNV-1a over the raw index words; exact keys want an exact hash.
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::int32_t word : key) {
        hash ^= static_cast<std::uint32_t>(word);
        hash *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(hash);
}

PairingSearch::PairingSearch(const QuantizerConfig& config)
    : quantizer_(config) {}

void PairingSearch::reset() { index_.clear(); }

std::optional<QuantizedKey> PairingSearch::predecessor_key(
    const std::vector<QuantizedEntry>& cells, const PairingScale& c) const {
    const int k = static_cast<int>(std::lround(std::sqrt(
        static_cast<double>(cells.size()))));
    QuantizedKey key;
    key.reserve(cells.size() * 2);
    for (int row = 0; row < k; ++row) {
        for (int col = 0; col < k; ++col) {
            const cplx rep = quantizer_.cell_value(cells[row * k + col]);
            // Invert the pairing map: the earlier matrix must quantize to
            // rep / c on the diagonal and -rep / c off it.
            cplx wanted = rep / c.value;
            if (row != col) {
                wanted = -wanted;
            }
            const auto cell = quantizer_.cell_of_lattice_value(wanted);
            if (!cell) {
                return std::nullopt;
            }
            key.push_back(cell->mag_idx);
            key.push_back(cell->phase_idx);
        }
    }
    return key;
}

std::optional<PairedChannels> PairingSearch::push(const ChannelMatrix& h) {
    const int k = h.num_users();
    std::vector<QuantizedEntry> cells;
    cells.reserve(static_cast<std::size_t>(k) * k);
    QuantizedKey key;
    key.reserve(static_cast<std::size_t>(k) * k * 2);
    for (int row = 0; row < k; ++row) {
        for (int col = 0; col < k; ++col) {
            const QuantizedEntry entry = quantizer_.quantize_entry(h.h(row, col));
            cells.push_back(entry);
            key.push_back(entry.mag_idx);
            key.push_back(entry.phase_idx);
        }
    }

    // Earliest stored slot wins when several scale candidates match.
    const Stored* best = nullptr;
    const PairingScale* best_scale = nullptr;
    for (const PairingScale& c : quantizer_.config().scale_candidates) {
        const auto wanted = predecessor_key(cells, c);
        if (!wanted) {
            continue;
        }
        const auto it = index_.find(*wanted);
        if (it == index_.end()) {
            continue;
        }
        if (best == nullptr || it->second.time_index < best->time_index) {
            best = &it->second;
            best_scale = &c;
        }
    }

    std::optional<PairedChannels> result;
    if (best != nullptr) {
        PairedChannels pair;
        pair.first = ChannelMatrix{best->h, best->time_index};
        pair.second = h;
        pair.scale = *best_scale;
        result = std::move(pair);
    }

    index_.try_emplace(std::move(key), Stored{h.time_index, h.h});
    return result;
}

std::optional<PairedChannels> find_pairing(
    const std::function<ChannelMatrix(std::int64_t)>& next,
    const QuantizerConfig& config, std::int64_t max_slots) {
    PairingSearch search(config);
    for (std::int64_t t = 0; t < max_slots; ++t) {
        if (auto pair = search.push(next(t))) {
            return pair;
        }
    }
    return std::nullopt;
}

std::optional<PairedChannels> find_pairing(
    const std::vector<ChannelMatrix>& block, const QuantizerConfig& config) {
    PairingSearch search(config);
    for (const ChannelMatrix& h : block) {
        if (auto pair = search.push(h)) {
            return pair;
        }
    }
    return std::nullopt;
}

PairedChannels sample_matched_pair(const SystemConfig& config,
                                   const QuantizerConfig& quant,
                                   const PairingScale& scale, RngStream& rng) {
    config.validate();
    const Quantizer quantizer(quant);
    const int k = config.num_users;

    // Upper bound on any single-cell probability, for the rejection step.
    double max_cell_prob = quantizer.cell_probability(QuantizedEntry{0, 0});
    for (std::int32_t idx = 1; idx <= quantizer.cap_index(); ++idx) {
        max_cell_prob = std::max(
            max_cell_prob, quantizer.cell_probability(QuantizedEntry{idx, 0}));
    }
    const double bound = std::pow(max_cell_prob, k * k);

    std::vector<QuantizedEntry> targets(static_cast<std::size_t>(k) * k);
    constexpr long kMaxAttempts = 100000000L;
    for (long attempt = 0; attempt < kMaxAttempts; ++attempt) {
        ChannelMatrix h1;
        h1.h.resize(k, k);
        h1.time_index = 0;
        double weight = 1.0;
        for (int row = 0; row < k; ++row) {
            for (int col = 0; col < k; ++col) {
                const cplx value = rng.gaussian();
                h1.h(row, col) = value;
                const QuantizedEntry cell = quantizer.quantize_entry(value);
                cplx wanted = scale.value * quantizer.cell_value(cell);
                if (row != col) {
                    wanted = -wanted;
                }
                const auto target = quantizer.cell_of_lattice_value(wanted);
                if (!target) {
                    throw std::invalid_argument(
                        "sample_matched_pair: scale maps a cell off the "
                        "lattice; use an on-grid scale (c = 1 needs an even "
                        "phase_bins)");
                }
                targets[static_cast<std::size_t>(row) * k + col] = *target;
                weight *= quantizer.cell_probability(*target);
            }
        }
        // Tilt the first matrix by the conditional match weight. Accepted
        // draws follow the law of H(t1) given that some i.i.d. H(t2) lands
        // in all target cells; drawing H(t2) inside those cells afterwards
        // completes the joint conditional law because entries are
        // independent.
        if (rng.uniform() > weight / bound) {
            continue;
        }
        ChannelMatrix h2;
        h2.h.resize(k, k);
        h2.time_index = 1;
        for (int row = 0; row < k; ++row) {
            for (int col = 0; col < k; ++col) {
                h2.h(row, col) = quantizer.sample_in_cell(
                    targets[static_cast<std::size_t>(row) * k + col], rng);
            }
        }
        PairedChannels pair;
        pair.first = std::move(h1);
        pair.second = std::move(h2);
        pair.scale = scale;
        return pair;
    }
    throw std::runtime_error(
        "sample_matched_pair: rejection sampler failed to accept; the "
        "quantizer grid makes matches too improbable");
}

std::optional<QuantizedKey> pairing_predecessor_key_for_test(
    const PairingSearch& search, const ChannelMatrix& h, const PairingScale& c) {
    std::vector<QuantizedEntry> cells;
    const int k = h.num_users();
    cells.reserve(static_cast<std::size_t>(k) * k);
    for (int row = 0; row < k; ++row) {
        for (int col = 0; col < k; ++col) {
            cells.push_back(search.quantizer_.quantize_entry(h.h(row, col)));
        }
    }
    return search.predecessor_key(cells, c);
}

}  // namespace eia
