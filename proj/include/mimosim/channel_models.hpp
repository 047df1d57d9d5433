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
// Channel matrix ensembles:
//
//   * i.i.d. circularly-symmetric complex Gaussian CN(0, 1) entries,
//   * Vandermonde steering matrices for a uniform linear array, entry
//     (m, n) = (1/sqrt(N)) * exp(-j 2 pi m (d/lambda) sin(theta_n)) with
//     angles of arrival drawn uniformly from (-alpha, +alpha),
//   * the unit-modulus uniform-phase comparison ensemble.
//
// All generators are pure functions of their inputs and a 64-bit seed.

#pragma once

#include <armadillo>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mimosim
{

/// Geometry of the uniform linear array and the angular spread of the users.
struct VandermondeParams
{
    std::size_t num_antennas = 1; ///< receive antennas (matrix rows, M)
    std::size_t num_users = 1;    ///< transmitters (matrix columns, N)
    double spacing_m = 0.0;       ///< antenna spacing d, meters
    double wavelength_m = 1.0;    ///< carrier wavelength lambda, meters
    double alpha_rad = 0.0;       ///< angle-of-arrival half-spread, [0, pi/2]

    void validate() const; ///< throws std::invalid_argument / std::domain_error
};

/// n independent angles, uniform on the open interval (-alpha, +alpha).
/// alpha = 0 degenerates to all-zero angles.
std::vector<double> sample_angles(double alpha_rad, std::size_t n, std::uint64_t seed);

/// Steering matrix for the given geometry and angle set. Row m carries the
/// m-th antenna phase, so the first row is constant 1/sqrt(N) and every
/// entry has modulus 1/sqrt(N).
arma::cx_mat vandermonde_matrix(const VandermondeParams &params, const std::vector<double> &angles_rad);

/// rows x cols i.i.d. CN(0, 1) entries.
arma::cx_mat gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// rows x cols entries (1/sqrt(cols)) * exp(-j phi), phi uniform on [0, 2 pi).
arma::cx_mat uniform_phase_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Which ensemble to draw a channel realization from. The Vandermonde
/// geometry fields are ignored by the other two kinds.
struct ChannelEnsemble
{
    enum class Kind
    {
        gaussian,
        vandermonde,
        uniform_phase
    };

    Kind kind = Kind::gaussian;
    double spacing_m = 0.0;
    double wavelength_m = 1.0;
    double alpha_rad = 0.0;

    static ChannelEnsemble gaussian() { return {}; }
    static ChannelEnsemble uniform_phase() { return {Kind::uniform_phase, 0.0, 1.0, 0.0}; }
    static ChannelEnsemble vandermonde(double spacing_m, double wavelength_m, double alpha_rad)
    {
        return {Kind::vandermonde, spacing_m, wavelength_m, alpha_rad};
    }
};

/// One realization of the chosen ensemble. For the Vandermonde kind the
/// per-user angles are drawn from the seed, then the matrix is built
/// deterministically.
arma::cx_mat sample_channel(const ChannelEnsemble &ensemble, std::size_t rows, std::size_t cols,
                            std::uint64_t seed);

/// Dimension and finiteness checks shared by consumers of channel matrices.
void assert_valid_channel(const arma::cx_mat &h);

// Matrix text format: header "rows,cols", then one line per entry
// "row,col,re,im" in row-major order, floats in shortest round-trip form.
void write_matrix_csv(std::ostream &os, const arma::cx_mat &h);
void write_matrix_csv(const std::string &path, const arma::cx_mat &h);
arma::cx_mat read_matrix_csv(std::istream &is);
arma::cx_mat read_matrix_csv(const std::string &path);

} // namespace mimosim
