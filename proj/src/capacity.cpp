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

#include "mimosim/capacity.hpp"

#include "mimosim/rng.hpp"
#include "mimosim/util.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

// B = I + (rho/N_t) H H^H is Hermitian positive definite; zherk builds it in
// one rank-k update and zpotrf factors it in place.
extern "C"
{
    void zherk_(const char *uplo, const char *trans, const int *n, const int *k, const double *alpha,
                const std::complex<double> *a, const int *lda, const double *beta,
                std::complex<double> *c, const int *ldc);
    void zpotrf_(const char *uplo, const int *n, std::complex<double> *a, const int *lda, int *info);
}

namespace mimosim
{

void SignalModelParams::validate() const
{
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("signal model: snr must be positive and finite");
    if (num_tx < 1)
        throw std::invalid_argument("signal model: num_tx must be >= 1");
    if (power_gain)
    {
        if (!power_gain->is_finite())
            throw std::invalid_argument("signal model: power gains must be finite");
        if (power_gain->n_elem > 0 && power_gain->min() < 0.0)
            throw std::invalid_argument("signal model: power gains must be >= 0");
    }
}

namespace detail
{

double capacity_core(const std::complex<double> *h, int rows, int cols, double snr_over_ntx,
                     std::vector<std::complex<double>> &workspace)
{
    const int n = rows;
    workspace.assign(static_cast<std::size_t>(n) * n, {0.0, 0.0});
    for (int i = 0; i < n; ++i)
        workspace[static_cast<std::size_t>(i) * n + i] = 1.0;

    const double beta = 1.0;
    zherk_("L", "N", &n, &cols, &snr_over_ntx, h, &rows, &beta, workspace.data(), &n);

    int info = 0;
    zpotrf_("L", &n, workspace.data(), &n, &info);
    if (info != 0)
        throw std::runtime_error("capacity: Cholesky factorization failed (info=" +
                                 std::to_string(info) + ")");

    double bits = 0.0;
    for (int i = 0; i < n; ++i)
        bits += 2.0 * std::log2(workspace[static_cast<std::size_t>(i) * n + i].real());
    return bits < 0.0 ? 0.0 : bits;
}

} // namespace detail

double capacity(const arma::cx_mat &h, const SignalModelParams &params)
{
    assert_valid_channel(h);
    params.validate();
    if (params.num_tx != h.n_cols)
        throw std::invalid_argument("capacity: num_tx must equal the channel column count");

    std::vector<std::complex<double>> ws;
    return detail::capacity_core(h.memptr(), static_cast<int>(h.n_rows),
                                 static_cast<int>(h.n_cols),
                                 params.snr / static_cast<double>(params.num_tx), ws);
}

arma::cx_vec received_signal(const arma::cx_mat &h, const arma::cx_vec &s,
                             const SignalModelParams &params, std::uint64_t seed, bool noiseless)
{
    assert_valid_channel(h);
    params.validate();
    if (s.n_elem != h.n_cols)
        throw std::invalid_argument("received_signal: transmit vector length must equal h columns");
    if (params.power_gain && params.power_gain->n_elem != h.n_cols)
        throw std::invalid_argument("received_signal: power gain length must equal h columns");

    arma::cx_vec x = s;
    if (params.power_gain)
        for (std::size_t i = 0; i < x.n_elem; ++i)
            x[i] *= std::sqrt((*params.power_gain)[i]);

    arma::cx_vec y = std::sqrt(params.snr) * (h * x);
    if (!noiseless)
    {
        Rng rng(seed);
        for (auto &v : y)
            v += rng.complex_gaussian();
    }
    return y;
}

CapacityCurve capacity_curve(const ChannelEnsemble &ensemble, const std::vector<std::size_t> &sizes,
                             double snr, std::size_t trials, std::uint64_t seed, unsigned workers)
{
    if (sizes.empty())
        throw std::invalid_argument("capacity_curve: sizes must be non-empty");
    for (std::size_t i = 0; i < sizes.size(); ++i)
    {
        if (sizes[i] < 1)
            throw std::invalid_argument("capacity_curve: sizes must be >= 1");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw std::invalid_argument("capacity_curve: sizes must be strictly increasing");
    }
    if (trials < 1)
        throw std::invalid_argument("capacity_curve: trials must be >= 1");
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("capacity_curve: snr must be positive and finite");

    CapacityCurve curve;
    curve.sizes = sizes;
    curve.trials = trials;
    curve.snr = snr;
    curve.mean_capacity.resize(sizes.size());
    curve.std_err.resize(sizes.size());

    std::vector<double> caps(trials);
    for (std::size_t si = 0; si < sizes.size(); ++si)
    {
        const std::size_t k = sizes[si];
        parallel_for_chunks(trials, workers, [&](std::size_t begin, std::size_t end) {
            std::vector<std::complex<double>> ws;
            for (std::size_t t = begin; t < end; ++t)
            {
                const arma::cx_mat h = sample_channel(ensemble, k, k, derive_stream(seed, si, t));
                caps[t] = detail::capacity_core(h.memptr(), static_cast<int>(k),
                                                static_cast<int>(k),
                                                snr / static_cast<double>(k), ws);
            }
        });

        double sum = 0.0;
        for (double c : caps)
            sum += c;
        const double mean = sum / static_cast<double>(trials);
        double ss = 0.0;
        for (double c : caps)
            ss += (c - mean) * (c - mean);
        curve.mean_capacity[si] = mean;
        curve.std_err[si] =
            trials > 1 ? std::sqrt(ss / (static_cast<double>(trials) * (trials - 1.0))) : 0.0;
    }
    return curve;
}

void write_curve_csv(std::ostream &os, const CapacityCurve &curve)
{
    os << "size,mean_capacity_bps_hz,std_err,trials,snr_linear\n";
    for (std::size_t i = 0; i < curve.sizes.size(); ++i)
        os << curve.sizes[i] << ',' << fmt_double(curve.mean_capacity[i]) << ','
           << fmt_double(curve.std_err[i]) << ',' << curve.trials << ',' << fmt_double(curve.snr)
           << '\n';
}

void write_curve_csv(const std::string &path, const CapacityCurve &curve)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open for writing: " + path);
    write_curve_csv(os, curve);
}

CapacityCurve read_curve_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line != "size,mean_capacity_bps_hz,std_err,trials,snr_linear")
        throw std::runtime_error("curve csv: bad or missing header");

    CapacityCurve curve;
    bool first = true;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        auto f = split_csv(line);
        if (f.size() != 5)
            throw std::runtime_error("curve csv: row must have 5 fields");
        curve.sizes.push_back(parse_size(f[0]));
        curve.mean_capacity.push_back(parse_double(f[1]));
        curve.std_err.push_back(parse_double(f[2]));
        const std::size_t trials = parse_size(f[3]);
        const double snr = parse_double(f[4]);
        if (first)
        {
            curve.trials = trials;
            curve.snr = snr;
            first = false;
        }
        else if (trials != curve.trials || snr != curve.snr)
            throw std::runtime_error("curve csv: trials/snr must be constant across rows");
    }
    if (curve.sizes.empty())
        throw std::runtime_error("curve csv: no data rows");
    for (std::size_t i = 1; i < curve.sizes.size(); ++i)
        if (curve.sizes[i] <= curve.sizes[i - 1])
            throw std::runtime_error("curve csv: sizes must be strictly increasing");
    return curve;
}

CapacityCurve read_curve_csv(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open for reading: " + path);
    return read_curve_csv(is);
}

} // namespace mimosim
