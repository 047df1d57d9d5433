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
// Log-det MIMO capacity, the narrowband received-signal model, and
// Monte-Carlo capacity-vs-antenna-count curves for any channel ensemble.

#pragma once

#include "mimosim/channel_models.hpp"

#include <armadillo>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mimosim
{

struct SignalModelParams
{
    double snr = 10.0;                  ///< common per-receive-antenna SNR rho, linear
    std::size_t num_tx = 1;             ///< transmit antenna count N_t
    std::optional<arma::vec> power_gain; ///< per-user gains (diagonal of P); identity if absent

    void validate() const;
};

/// Spectral efficiency log2 det(I + (rho/N_t) H H^H) in bits/s/Hz, computed
/// through a Cholesky factorization of the (Hermitian positive definite)
/// argument so 30x30 schemes stay far from overflow. Requires
/// params.num_tx == h.n_cols and finite entries.
double capacity(const arma::cx_mat &h, const SignalModelParams &params);

/// y = sqrt(rho) H P^(1/2) s + n with n i.i.d. CN(0, 1); `noiseless`
/// forces n = 0. s must have h.n_cols entries.
arma::cx_vec received_signal(const arma::cx_mat &h, const arma::cx_vec &s,
                             const SignalModelParams &params, std::uint64_t seed,
                             bool noiseless = false);

/// Mean capacity per square scheme size, with the standard error of each
/// mean so downstream checks can build 3-sigma bands.
struct CapacityCurve
{
    std::vector<std::size_t> sizes;
    std::vector<double> mean_capacity; ///< bits/s/Hz
    std::vector<double> std_err;
    std::size_t trials = 0;
    double snr = 0.0; ///< linear
};

/// Averages capacity over `trials` fresh k x k realizations of the ensemble
/// for each size k. Every (size, trial) cell runs on its own derived random
/// stream and the reduction is done in trial order, so the result is
/// bit-identical for any worker count (workers = 0 picks hardware
/// concurrency).
CapacityCurve capacity_curve(const ChannelEnsemble &ensemble, const std::vector<std::size_t> &sizes,
                             double snr, std::size_t trials, std::uint64_t seed,
                             unsigned workers = 1);

// Curve text format: header "size,mean_capacity_bps_hz,std_err,trials,snr_linear",
// one row per size. This is both the plotting interface and the fit target input.
void write_curve_csv(std::ostream &os, const CapacityCurve &curve);
void write_curve_csv(const std::string &path, const CapacityCurve &curve);
CapacityCurve read_curve_csv(std::istream &is);
CapacityCurve read_curve_csv(const std::string &path);

namespace detail
{
/// Core log-det evaluation on a raw column-major matrix. `workspace` is
/// reused across calls to keep Monte-Carlo loops allocation-free.
double capacity_core(const std::complex<double> *h, int rows, int cols, double snr_over_ntx,
                     std::vector<std::complex<double>> &workspace);
} // namespace detail

} // namespace mimosim
