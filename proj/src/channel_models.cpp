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

#include "mimosim/channel_models.hpp"

#include "mimosim/rng.hpp"
#include "mimosim/util.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mimosim
{

void VandermondeParams::validate() const
{
    if (num_antennas < 1 || num_users < 1)
        throw std::invalid_argument("vandermonde: antenna and user counts must be >= 1");
    if (spacing_m < 0.0)
        throw std::invalid_argument("vandermonde: antenna spacing must be >= 0");
    if (!(wavelength_m > 0.0))
        throw std::invalid_argument("vandermonde: wavelength must be > 0");
    if (!(alpha_rad >= 0.0 && alpha_rad <= pi / 2.0))
        throw std::domain_error("vandermonde: alpha must lie in [0, pi/2]");
}

std::vector<double> sample_angles(double alpha_rad, std::size_t n, std::uint64_t seed)
{
    if (!(alpha_rad >= 0.0 && alpha_rad <= pi / 2.0))
        throw std::domain_error("sample_angles: alpha must lie in [0, pi/2]");
    if (n < 1)
        throw std::invalid_argument("sample_angles: need at least one angle");
    Rng rng(seed);
    std::vector<double> angles(n);
    for (auto &a : angles)
        a = rng.uniform(-alpha_rad, alpha_rad);
    return angles;
}

arma::cx_mat vandermonde_matrix(const VandermondeParams &params, const std::vector<double> &angles_rad)
{
    params.validate();
    if (angles_rad.size() != params.num_users)
        throw std::invalid_argument("vandermonde_matrix: angle count does not match user count");

    const std::size_t m_rows = params.num_antennas;
    const std::size_t n_cols = params.num_users;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_cols));
    const double phase_scale = -2.0 * pi * params.spacing_m / params.wavelength_m;

    arma::cx_mat v(m_rows, n_cols);
    for (std::size_t n = 0; n < n_cols; ++n)
    {
        // column n is a geometric progression in w = exp(-j 2 pi (d/lambda) sin(theta_n))
        const std::complex<double> w = std::polar(1.0, phase_scale * std::sin(angles_rad[n]));
        std::complex<double> e(inv_sqrt_n, 0.0);
        std::complex<double> *col = v.colptr(n);
        for (std::size_t m = 0; m < m_rows; ++m)
        {
            col[m] = e;
            e *= w;
        }
    }
    return v;
}

arma::cx_mat gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("gaussian_matrix: dimensions must be >= 1");
    Rng rng(seed);
    arma::cx_mat h(rows, cols);
    for (auto &e : h) // column-major fill
        e = rng.complex_gaussian();
    return h;
}

arma::cx_mat uniform_phase_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("uniform_phase_matrix: dimensions must be >= 1");
    Rng rng(seed);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(cols));
    arma::cx_mat h(rows, cols);
    for (auto &e : h)
        e = std::polar(inv_sqrt_n, -2.0 * pi * rng.uniform());
    return h;
}

arma::cx_mat sample_channel(const ChannelEnsemble &ensemble, std::size_t rows, std::size_t cols,
                            std::uint64_t seed)
{
    switch (ensemble.kind)
    {
    case ChannelEnsemble::Kind::gaussian:
        return gaussian_matrix(rows, cols, seed);
    case ChannelEnsemble::Kind::uniform_phase:
        return uniform_phase_matrix(rows, cols, seed);
    case ChannelEnsemble::Kind::vandermonde:
    {
        VandermondeParams p;
        p.num_antennas = rows;
        p.num_users = cols;
        p.spacing_m = ensemble.spacing_m;
        p.wavelength_m = ensemble.wavelength_m;
        p.alpha_rad = ensemble.alpha_rad;
        return vandermonde_matrix(p, sample_angles(p.alpha_rad, cols, seed));
    }
    }
    throw std::invalid_argument("sample_channel: unknown ensemble kind");
}

void assert_valid_channel(const arma::cx_mat &h)
{
    if (h.n_rows < 1 || h.n_cols < 1)
        throw std::invalid_argument("channel matrix must have at least one row and column");
    if (!h.is_finite())
        throw std::invalid_argument("channel matrix has non-finite entries");
}

void write_matrix_csv(std::ostream &os, const arma::cx_mat &h)
{
    assert_valid_channel(h);
    os << h.n_rows << ',' << h.n_cols << '\n';
    for (std::size_t r = 0; r < h.n_rows; ++r)
        for (std::size_t c = 0; c < h.n_cols; ++c)
        {
            const auto &e = h(r, c);
            os << r << ',' << c << ',' << fmt_double(e.real()) << ',' << fmt_double(e.imag())
               << '\n';
        }
}

void write_matrix_csv(const std::string &path, const arma::cx_mat &h)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open for writing: " + path);
    write_matrix_csv(os, h);
}

arma::cx_mat read_matrix_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("matrix csv: empty input");
    auto header = split_csv(line);
    if (header.size() != 2)
        throw std::runtime_error("matrix csv: header must be 'rows,cols'");
    const std::size_t rows = parse_size(header[0]);
    const std::size_t cols = parse_size(header[1]);
    if (rows < 1 || cols < 1)
        throw std::runtime_error("matrix csv: dimensions must be >= 1");

    arma::cx_mat h(rows, cols, arma::fill::zeros);
    std::vector<bool> seen(rows * cols, false);
    std::size_t count = 0;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        auto f = split_csv(line);
        if (f.size() != 4)
            throw std::runtime_error("matrix csv: entry line must be 'row,col,re,im'");
        const std::size_t r = parse_size(f[0]);
        const std::size_t c = parse_size(f[1]);
        if (r >= rows || c >= cols)
            throw std::runtime_error("matrix csv: entry index out of range");
        if (seen[r * cols + c])
            throw std::runtime_error("matrix csv: duplicate entry");
        seen[r * cols + c] = true;
        h(r, c) = {parse_double(f[2]), parse_double(f[3])};
        ++count;
    }
    if (count != rows * cols)
        throw std::runtime_error("matrix csv: missing entries");
    return h;
}

arma::cx_mat read_matrix_csv(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open for reading: " + path);
    return read_matrix_csv(is);
}

} // namespace mimosim
