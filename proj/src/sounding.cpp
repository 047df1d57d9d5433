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

#include "mimosim/sounding.hpp"

#include "mimosim/channel_models.hpp"
#include "mimosim/util.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace mimosim
{

std::uint32_t default_primitive_taps(unsigned degree)
{
    // One primitive polynomial per degree; bit j = coefficient of x^j.
    // All entries are re-verified by the period check in gen_pn.
    switch (degree)
    {
    case 2: return 0x3;     // x^2 + x + 1
    case 3: return 0x3;     // x^3 + x + 1
    case 4: return 0x3;     // x^4 + x + 1
    case 5: return 0x5;     // x^5 + x^2 + 1
    case 6: return 0x3;     // x^6 + x + 1
    case 7: return 0x9;     // x^7 + x^3 + 1
    case 8: return 0x1d;    // x^8 + x^4 + x^3 + x^2 + 1
    case 9: return 0x21;    // x^9 + x^5 + 1
    case 10: return 0x9;    // x^10 + x^3 + 1
    case 11: return 0x5;    // x^11 + x^2 + 1
    case 12: return 0x53;   // x^12 + x^6 + x^4 + x + 1
    case 13: return 0x1b;   // x^13 + x^4 + x^3 + x + 1
    case 14: return 0x443;  // x^14 + x^10 + x^6 + x + 1
    case 15: return 0x3;    // x^15 + x + 1
    case 16: return 0x100b; // x^16 + x^12 + x^3 + x + 1
    default:
        throw std::invalid_argument("no default primitive polynomial for degree " +
                                    std::to_string(degree));
    }
}

PnSequence gen_pn(unsigned degree, std::uint32_t taps, std::uint64_t seed_state)
{
    if (degree < 2 || degree > 20)
        throw std::invalid_argument("gen_pn: degree must lie in [2, 20]");
    const std::uint32_t mask = (1u << degree) - 1u;
    std::uint32_t state = static_cast<std::uint32_t>(seed_state) & mask;
    if (state == 0)
        throw std::invalid_argument("gen_pn: register seed state must be nonzero");
    if ((taps & 1u) == 0 || (taps & ~mask) != 0)
        throw std::invalid_argument("gen_pn: taps must have the x^0 term set and fit the degree");

    const std::size_t period = (std::size_t(1) << degree) - 1;
    const std::uint32_t initial = state;

    PnSequence pn;
    pn.degree = degree;
    pn.taps = taps;
    pn.chips.resize(period);
    for (std::size_t i = 0; i < period; ++i)
    {
        const int bit = static_cast<int>(state & 1u);
        pn.chips[i] = 1 - 2 * bit;
        const std::uint32_t fb = static_cast<std::uint32_t>(__builtin_parity(state & taps));
        state = (state >> 1) | (fb << (degree - 1));
        if (state == 0)
            throw std::invalid_argument("gen_pn: taps drove the register to zero (not primitive)");
        if (state == initial && i + 1 != period)
            throw std::invalid_argument("gen_pn: sequence period " + std::to_string(i + 1) +
                                        " != " + std::to_string(period) + " (taps not primitive)");
    }
    if (state != initial)
        throw std::invalid_argument("gen_pn: register did not return to its seed (taps not primitive)");
    return pn;
}

std::vector<long long> circular_autocorr_int(const PnSequence &x)
{
    const std::size_t n = x.length();
    std::vector<int> twice(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        twice[i] = twice[i + n] = x.chips[i];

    std::vector<long long> r(n);
    for (std::size_t lag = 0; lag < n; ++lag)
    {
        long long acc = 0;
        for (std::size_t i = 0; i < n; ++i)
            acc += static_cast<long long>(x.chips[i]) * twice[i + lag];
        r[lag] = acc;
    }
    return r;
}

CorrelationSeries circular_autocorr(const PnSequence &x)
{
    const auto raw = circular_autocorr_int(x);
    CorrelationSeries s;
    s.values.resize(raw.size());
    const double n = static_cast<double>(x.length());
    for (std::size_t i = 0; i < raw.size(); ++i)
        s.values[i] = {static_cast<double>(raw[i]) / n, 0.0};
    return s;
}

CorrelationSeries cross_correlate(const PnSequence &x, const std::vector<std::complex<double>> &y)
{
    const std::size_t n = x.length();
    if (y.size() != n)
        throw std::invalid_argument("cross_correlate: received block must span one full period");

    std::vector<std::complex<double>> twice(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        twice[i] = twice[i + n] = y[i];

    CorrelationSeries s;
    s.values.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t lag = 0; lag < n; ++lag)
    {
        double re = 0.0, im = 0.0;
        const std::complex<double> *yy = twice.data() + lag;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double c = static_cast<double>(x.chips[i]);
            re += c * yy[i].real();
            im += c * yy[i].imag();
        }
        s.values[lag] = {re * inv_n, im * inv_n};
    }
    return s;
}

std::complex<double> estimate_gain(const PnSequence &x, const std::vector<std::complex<double>> &y)
{
    const CorrelationSeries corr = cross_correlate(x, y);
    const std::size_t n = corr.values.size();
    if (n == 1)
        return corr.values[0];

    std::size_t peak = 0;
    double peak_mag = std::norm(corr.values[0]);
    for (std::size_t i = 1; i < n; ++i)
    {
        const double m = std::norm(corr.values[i]);
        if (m > peak_mag)
        {
            peak_mag = m;
            peak = i;
        }
    }

    std::complex<double> floor_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (i != peak)
            floor_sum += corr.values[i];
    const std::complex<double> floor = floor_sum / static_cast<double>(n - 1);

    const double nn = static_cast<double>(n);
    return (corr.values[peak] - floor) * (nn / (nn + 1.0));
}

void TdmaSchedule::validate() const
{
    if (num_tx < 1)
        throw std::invalid_argument("tdma schedule: need at least one transmitter");
    if (!(slot_ms > 0.0))
        throw std::invalid_argument("tdma schedule: slot duration must be > 0");
    if (assignments.size() != num_tx)
        throw std::invalid_argument("tdma schedule: one slot assignment per transmitter required");
    std::vector<bool> used(num_tx, false);
    for (std::size_t slot : assignments)
    {
        if (slot >= num_tx || used[slot])
            throw std::invalid_argument("tdma schedule: assignments must form a permutation");
        used[slot] = true;
    }
}

std::vector<std::size_t> TdmaSchedule::slot_to_tx() const
{
    std::vector<std::size_t> inv(num_tx, 0);
    for (std::size_t tx = 0; tx < assignments.size(); ++tx)
        inv[assignments[tx]] = tx;
    return inv;
}

TdmaSchedule build_tdma_schedule(std::size_t num_tx, double slot_ms)
{
    TdmaSchedule s;
    s.num_tx = num_tx;
    s.slot_ms = slot_ms;
    s.assignments.resize(num_tx);
    for (std::size_t i = 0; i < num_tx; ++i)
        s.assignments[i] = i;
    s.validate();
    return s;
}

nlohmann::json schedule_to_json(const TdmaSchedule &s)
{
    return nlohmann::json{{"num_tx", s.num_tx}, {"slot_ms", s.slot_ms}, {"assignments", s.assignments}};
}

TdmaSchedule schedule_from_json(const nlohmann::json &j)
{
    TdmaSchedule s;
    s.num_tx = j.at("num_tx").get<std::size_t>();
    s.slot_ms = j.at("slot_ms").get<double>();
    s.assignments = j.at("assignments").get<std::vector<std::size_t>>();
    s.validate();
    return s;
}

void ImpairmentSpec::validate() const
{
    if (std::isnan(snr_db))
        throw std::invalid_argument("impairments: snr_db must not be NaN");
    if (cfo_hz && !(sample_rate_hz > 0.0))
        throw std::invalid_argument("impairments: sample rate must be > 0 when CFO is present");
}

std::complex<double> simulate_link(const PnSequence &pn, std::complex<double> gain,
                                   const ImpairmentSpec &imp, std::uint64_t seed)
{
    imp.validate();
    const std::size_t n = pn.length();
    std::vector<std::complex<double>> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = gain * static_cast<double>(pn.chips[i]);

    if (imp.cfo_hz && *imp.cfo_hz != 0.0)
    {
        const std::complex<double> step =
            std::polar(1.0, 2.0 * pi * (*imp.cfo_hz) / imp.sample_rate_hz);
        std::complex<double> rot(1.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
        {
            y[i] *= rot;
            rot *= step;
        }
    }

    if (!imp.noiseless())
    {
        Rng rng(seed);
        const double sigma = std::sqrt(1.0 / imp.snr_linear());
        for (std::size_t i = 0; i < n; ++i)
            y[i] += sigma * rng.complex_gaussian();
    }
    return estimate_gain(pn, y);
}

arma::cx_mat simulate_sounding_round(const arma::cx_mat &h_true, const TdmaSchedule &schedule,
                                     const PnSequence &pn, const ImpairmentSpec &imp,
                                     std::uint64_t seed)
{
    assert_valid_channel(h_true);
    schedule.validate();
    imp.validate();
    if (schedule.num_tx != h_true.n_cols)
        throw std::invalid_argument("sounding round: schedule transmitter count must equal h columns");

    const auto tx_of_slot = schedule.slot_to_tx();
    arma::cx_mat est(h_true.n_rows, h_true.n_cols);
    for (std::size_t slot = 0; slot < schedule.num_tx; ++slot)
    {
        const std::size_t tx = tx_of_slot[slot];
        for (std::size_t rx = 0; rx < h_true.n_rows; ++rx)
            est(rx, tx) = simulate_link(pn, h_true(rx, tx), imp, link_seed(seed, slot, rx));
    }
    return est;
}

} // namespace mimosim
