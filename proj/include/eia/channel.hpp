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
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "eia/rng.hpp"

namespace eia {

using cplx = std::complex<double>;

// Parameters of the K-user interference channel. All K transmitters use the
// same average power budget and all receivers see the same noise level.
struct SystemConfig {
    int num_users = 3;            // K, at least 3
    double power = 1.0;           // per-transmitter symbol power P
    double noise_variance = 1.0;  // receiver noise power N0 (0 = noiseless)
    std::uint64_t rng_seed = 1;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

// One fading realization H(t). entry(j, i) is the gain from transmitter i to
// receiver j, so row j collects everything receiver j hears.
struct ChannelMatrix {
    Eigen::MatrixXcd h;
    std::int64_t time_index = 0;

    int num_users() const { return static_cast<int>(h.rows()); }
};

// Complex scale c relating the two slots of a complementary pair.
struct PairingScale {
    cplx value{1.0, 0.0};
};

// Polar-grid quantizer settings used by the pairing search. Magnitudes are
// rounded to multiples of magnitude_step and clipped at magnitude_cap; phases
// are rounded to one of phase_bins sectors. scale_candidates lists the values
// of c the search is willing to match against.
struct QuantizerConfig {
    double magnitude_step = 1.0;
    int phase_bins = 4;
    double magnitude_cap = 2.0;
    std::vector<PairingScale> scale_candidates = {PairingScale{}};

    void validate() const;
};

// Two slots whose fading matrices are complementary up to scale: the second
// matrix equals c times the first with every off-diagonal entry negated
// (exactly under a genie, to quantizer resolution under search pairing).
struct PairedChannels {
    ChannelMatrix first;
    ChannelMatrix second;
    PairingScale scale;

    std::int64_t t1() const { return first.time_index; }
    std::int64_t t2() const { return second.time_index; }
};

// Negates every off-diagonal entry and keeps the diagonal.
Eigen::MatrixXcd flip_off_diagonal(const Eigen::MatrixXcd& h);

// Draws H(t) with i.i.d. CN(0, 1) entries.
ChannelMatrix sample_channel(const SystemConfig& config, RngStream& rng,
                             std::int64_t time_index = 0);

// Builds the exact complement of h1 at time_index: c * flip(h1).
// Precondition: scale.value != 0.
ChannelMatrix genie_pair(const ChannelMatrix& h1, const PairingScale& scale,
                         std::int64_t time_index);

// Tests whether (h1, h2) are complementary up to scale. The candidate scale
// is read off the diagonal ratio h2(0,0)/h1(0,0); the match succeeds when
// every entry of h2 agrees with c * flip(h1) within tolerance (absolute, per
// entry). Returns the recovered scale, or nullopt. Diagonal entries of h1
// with magnitude below coeff_floor make the ratio meaningless and fail the
// test.
std::optional<PairingScale> is_complementary_pair(const ChannelMatrix& h1,
                                                  const ChannelMatrix& h2,
                                                  double tolerance,
                                                  double coeff_floor = 1e-6);

// Integer lattice coordinates of one quantized entry. mag_idx counts
// magnitude steps; the reserved value from Quantizer::cap_index() marks
// entries at or beyond the cap. Entries in the zero-magnitude cell carry
// phase_idx 0 by convention so equal cells always compare equal.
struct QuantizedEntry {
    std::int32_t mag_idx = 0;
    std::int32_t phase_idx = 0;

    bool operator==(const QuantizedEntry&) const = default;
};

// Exact-compare key of a quantized matrix: entries in row-major order.
using QuantizedKey = std::vector<std::int32_t>;

class Quantizer {
  public:
    explicit Quantizer(QuantizerConfig config);

    const QuantizerConfig& config() const { return config_; }

    // Largest regular magnitude index; anything that would round higher
    // collapses to cap_index().
    std::int32_t max_mag_index() const { return max_mag_index_; }
    std::int32_t cap_index() const { return max_mag_index_ + 1; }

    QuantizedEntry quantize_entry(cplx value) const;

    // Representative point of a cell: the lattice value the cell rounds to.
    // Capped cells map to magnitude_cap exactly.
    cplx cell_value(const QuantizedEntry& entry) const;

    // Nearest cell whose representative equals `value` up to rounding noise;
    // nullopt when `value` is not a lattice point. Used to chase a quantized
    // entry through exact arithmetic (negation, division by c) and land back
    // on the grid.
    std::optional<QuantizedEntry> cell_of_lattice_value(cplx value) const;

    // Probability that a CN(0, 1) draw falls in the given cell.
    double cell_probability(const QuantizedEntry& entry) const;

    // Draws one CN(0, 1) value conditioned on landing in the given cell.
    cplx sample_in_cell(const QuantizedEntry& entry, RngStream& rng) const;

  private:
    QuantizerConfig config_;
    std::int32_t max_mag_index_ = 0;

    // [r_low, r_high) magnitude band of a cell.
    void magnitude_band(std::int32_t mag_idx, double* r_low,
                        double* r_high) const;
};

// Quantizes every entry; the result carries cell representative values and
// the original time index. Idempotent: quantize(quantize(h)) == quantize(h).
ChannelMatrix quantize(const ChannelMatrix& h, const QuantizerConfig& config);

// Row-major integer key of the quantized matrix, suitable for exact hashing.
QuantizedKey quantized_key(const ChannelMatrix& h,
                           const QuantizerConfig& config);

// Streaming pairing search. Feed matrices in time order; push() answers with
// a pair as soon as the newest matrix is the quantized complement (for some
// candidate scale) of an earlier one. The earliest matching slot wins. The
// index stores each distinct quantized key once, keyed to its first
// occurrence, so memory grows with the number of distinct cells visited, not
// with time.
class PairingSearch {
  public:
    explicit PairingSearch(const QuantizerConfig& config);

    std::optional<PairedChannels> push(const ChannelMatrix& h);

    void reset();

    std::size_t index_size() const { return index_.size(); }

  private:
    struct KeyHash {
        std::size_t operator()(const QuantizedKey& key) const;
    };
    struct Stored {
        std::int64_t time_index;
        Eigen::MatrixXcd h;
    };

    Quantizer quantizer_;
    std::unordered_map<QuantizedKey, Stored, KeyHash> index_;

    // Key an earlier matrix must have so that `h` completes a pair under
    // scale c, i.e. the key of flip(q) / c entry by entry. nullopt when that
    // point leaves the lattice (then no exact-cell predecessor can exist).
    std::optional<QuantizedKey> predecessor_key(
        const std::vector<QuantizedEntry>& cells, const PairingScale& c) const;

    friend std::optional<QuantizedKey> pairing_predecessor_key_for_test(
        const PairingSearch& search, const ChannelMatrix& h,
        const PairingScale& c);
};

// Test hook: the index key an earlier matrix must have for `h` to complete a
// pair under scale c, or nullopt when the inverted pattern leaves the grid.
std::optional<QuantizedKey> pairing_predecessor_key_for_test(
    const PairingSearch& search, const ChannelMatrix& h, const PairingScale& c);

// Runs the search over draws produced by `next` until a pair is found or
// max_slots draws are exhausted.
std::optional<PairedChannels> find_pairing(
    const std::function<ChannelMatrix(std::int64_t)>& next,
    const QuantizerConfig& config, std::int64_t max_slots);

// Convenience overload over a pre-drawn block of matrices.
std::optional<PairedChannels> find_pairing(
    const std::vector<ChannelMatrix>& block, const QuantizerConfig& config);

// Draws (H(t1), H(t2)) from the law of an i.i.d. CN(0,1) matrix pair
// conditioned on the quantized-match event for the given scale: every entry
// of H(t2) falls in the cell of c * (+/-) the quantized entry of H(t1).
// Matching is rare on fine grids, so rejection against the unconditioned
// stream is impractical; this sampler tilts H(t1) by the exact conditional
// weight and then draws H(t2) entries inside their target cells, which gives
// the same joint law because entries are independent across the matrix.
// Precondition: every target cell stays on the lattice (holds for c = 1 with
// an even number of phase bins). Throws std::invalid_argument otherwise.
PairedChannels sample_matched_pair(const SystemConfig& config,
                                   const QuantizerConfig& quant,
                                   const PairingScale& scale, RngStream& rng);

}  // namespace eia
