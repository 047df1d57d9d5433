// SPDX-License-Identifier: Apache-2.0
//
// mimosim - TDMA massive MIMO channel sounding and capacity simulation toolkit
// Copyright (C) 2026 mimosim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// The measurement path of the emulated testbed: maximal-length PN
// sequences, circular correlation, per-link gain estimation, TDMA slot
// scheduling and the full sounding round that assembles an estimated
// channel matrix.

#pragma once

#include "mimosim/rng.hpp"

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <vector>

namespace mimosim
{

/// Maximal-length +/-1 sounding sequence with its LFSR generator metadata.
/// length == 2^degree - 1 and the chips sum to -1 (m-sequence balance).
struct PnSequence
{
    unsigned degree = 0;
    std::uint32_t taps = 0; ///< bit j = coefficient of x^j; the x^degree term is implicit
    std::vector<int> chips; ///< +/-1 values, bit 0 -> +1, bit 1 -> -1

    std::size_t length() const { return chips.size(); }
};

/// Default primitive feedback polynomial for each supported degree (2..16).
std::uint32_t default_primitive_taps(unsigned degree);

/// Runs a Fibonacci LFSR with the recurrence s[t+k] = sum_j taps_j s[t+j]
/// (mod 2) for one full period. The period is checked against 2^degree - 1;
/// non-primitive taps or a zero register are rejected.
PnSequence gen_pn(unsigned degree, std::uint32_t taps, std::uint64_t seed_state);

/// Correlation values per circular lag 0 .. length-1, normalized by the
/// sequence length.
struct CorrelationSeries
{
    std::vector<std::complex<double>> values;
};

/// Integer circular autocorrelation (no normalization). For an m-sequence
/// this is exactly `length` at lag 0 and -1 at every other lag.
std::vector<long long> circular_autocorr_int(const PnSequence &x);

/// circular_autocorr_int divided by the sequence length.
CorrelationSeries circular_autocorr(const PnSequence &x);

/// Normalized circular cross-correlation of the known chips against one
/// received period: values[n] = (1/N) sum_i x[i] y[(i+n) mod N].
CorrelationSeries cross_correlate(const PnSequence &x, const std::vector<std::complex<double>> &y);

/// Peak-lag gain estimate, corrected for the m-sequence off-peak floor.
/// A clean received period y = h x yields a correlation of h at the peak
/// and -h/N elsewhere, so peak minus off-peak mean equals h (N+1)/N; the
/// estimate rescales by N/(N+1) and therefore recovers h exactly in the
/// noiseless case. Subtracting the floor also cancels any constant offset
/// contributed by the noise across lags.
std::complex<double> estimate_gain(const PnSequence &x, const std::vector<std::complex<double>> &y);

/// Per-transmitter slot assignment. Identity by construction; the
/// assignment vector maps transmitter index -> slot index and must stay a
/// permutation.
struct TdmaSchedule
{
    std::size_t num_tx = 0;
    double slot_ms = 0.0;
    std::vector<std::size_t> assignments;

    double round_ms() const { return static_cast<double>(num_tx) * slot_ms; }
    void validate() const;
    /// slot -> transmitter lookup (inverse of assignments).
    std::vector<std::size_t> slot_to_tx() const;
};

TdmaSchedule build_tdma_schedule(std::size_t num_tx, double slot_ms);

nlohmann::json schedule_to_json(const TdmaSchedule &s);
TdmaSchedule schedule_from_json(const nlohmann::json &j);

/// Receive-side impairments applied to each sounded link. snr_db may be
/// +infinity for the noiseless case; CFO rotates the received block by
/// exp(j 2 pi cfo t / sample_rate) per chip.
struct ImpairmentSpec
{
    double snr_db = std::numeric_limits<double>::infinity();
    std::optional<double> cfo_hz;
    double sample_rate_hz = 1.0e6;

    bool noiseless() const { return std::isinf(snr_db); }
    double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }
    void validate() const;
};

/// Stream seed for the (slot, rx) link inside a round. Both the in-process
/// round and the distributed units derive link noise from this, which is
/// what makes their results bit-identical.
constexpr std::uint64_t link_seed(std::uint64_t round_seed, std::size_t slot, std::size_t rx)
{
    return derive_stream(round_seed, slot, rx);
}

/// One link observation and its gain estimate: y = gain * chips, CFO
/// rotation if configured, then CN(0, 1/rho) noise per chip.
std::complex<double> simulate_link(const PnSequence &pn, std::complex<double> gain,
                                   const ImpairmentSpec &imp, std::uint64_t seed);

/// Full TDMA round over a static channel: each slot carries one
/// transmitter's PN period, every receive antenna estimates its link, and
/// the estimates assemble into the returned matrix (same shape as h_true).
/// With infinite SNR and no CFO the estimate matches h_true to float
/// rounding.
arma::cx_mat simulate_sounding_round(const arma::cx_mat &h_true, const TdmaSchedule &schedule,
                                     const PnSequence &pn, const ImpairmentSpec &imp,
                                     std::uint64_t seed);

} // namespace mimosim
