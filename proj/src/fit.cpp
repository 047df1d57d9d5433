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

#include "mimosim/fit.hpp"

#include "mimosim/rng.hpp"
#include "mimosim/util.hpp"

#include <fstream>
#include <stdexcept>

namespace mimosim
{

namespace
{

void require_increasing(const std::vector<double> &v, const char *what)
{
    if (v.empty())
        throw std::invalid_argument(std::string("fit grid: ") + what + " must be non-empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw std::invalid_argument(std::string("fit grid: ") + what +
                                        " must be strictly increasing");
}

CapacityCurve candidate_curve(const FitGrid &cfg, double d_half_lambda, double alpha_deg,
                              std::uint64_t seed)
{
    const auto ens = ChannelEnsemble::vandermonde(0.5 * cfg.wavelength_m * d_half_lambda,
                                                  cfg.wavelength_m, alpha_deg * pi / 180.0);
    return capacity_curve(ens, cfg.sizes, cfg.snr, cfg.trials, seed);
}

} // namespace

void FitGrid::validate() const
{
    require_increasing(d_half_lambda, "spacing grid");
    require_increasing(alphas_deg, "alpha grid");
    if (d_half_lambda.front() < 0.0)
        throw std::invalid_argument("fit grid: spacings must be >= 0");
    if (alphas_deg.front() < 0.0 || alphas_deg.back() > 90.0)
        throw std::invalid_argument("fit grid: alphas must lie in [0, 90] degrees");
    if (!(wavelength_m > 0.0))
        throw std::invalid_argument("fit grid: wavelength must be > 0");
    if (!(snr > 0.0))
        throw std::invalid_argument("fit grid: snr must be > 0");
    if (trials < 1)
        throw std::invalid_argument("fit grid: trials must be >= 1");
    if (sizes.empty())
        throw std::invalid_argument("fit grid: sizes must be non-empty");
}

double FitResult::alpha_rad() const
{
    return alpha_deg * pi / 180.0;
}

double mme(const CapacityCurve &target, const CapacityCurve &candidate)
{
    if (target.sizes != candidate.sizes)
        throw std::invalid_argument("mme: curves must share the same size grid");
    if (target.snr != candidate.snr)
        throw std::invalid_argument("mme: curves must share the same SNR");
    double acc = 0.0;
    for (std::size_t i = 0; i < target.sizes.size(); ++i)
    {
        const double d = target.mean_capacity[i] - candidate.mean_capacity[i];
        acc += d * d;
    }
    return acc / static_cast<double>(target.sizes.size());
}

FitResult fit_alpha(const CapacityCurve &target, double d_half_lambda,
                    const std::vector<double> &alphas_deg, const FitGrid &cfg, std::uint64_t seed)
{
    require_increasing(alphas_deg, "alpha grid");

    FitResult best;
    bool have_best = false;
    for (std::size_t ai = 0; ai < alphas_deg.size(); ++ai)
    {
        CapacityCurve curve = candidate_curve(cfg, d_half_lambda, alphas_deg[ai],
                                              derive_stream(seed, ai));
        const double score = mme(target, curve);
        if (!have_best || score < best.score)
        {
            best.d_half_lambda = d_half_lambda;
            best.alpha_deg = alphas_deg[ai];
            best.wavelength_m = cfg.wavelength_m;
            best.score = score;
            best.curve = std::move(curve);
            have_best = true;
        }
    }
    return best;
}

FitReport fit_grid(const CapacityCurve &target, const FitGrid &grid, std::uint64_t seed,
                   unsigned workers)
{
    grid.validate();
    if (target.sizes != grid.sizes)
        throw std::invalid_argument("fit_grid: target curve sizes must match the grid sizes");

    const std::size_t nd = grid.d_half_lambda.size();
    const std::size_t na = grid.alphas_deg.size();
    const std::size_t cells = nd * na;

    std::vector<double> scores(cells);
    std::vector<CapacityCurve> curves(cells);
    parallel_for_chunks(cells, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t cell = begin; cell < end; ++cell)
        {
            const std::size_t di = cell / na;
            const std::size_t ai = cell % na;
            curves[cell] = candidate_curve(grid, grid.d_half_lambda[di], grid.alphas_deg[ai],
                                           derive_stream(seed, di, ai));
            scores[cell] = mme(target, curves[cell]);
        }
    });

    FitReport report;
    report.table.resize(cells);
    std::size_t best_cell = 0;
    for (std::size_t cell = 0; cell < cells; ++cell)
    {
        const std::size_t di = cell / na;
        const std::size_t ai = cell % na;
        report.table[cell] = {grid.d_half_lambda[di], grid.alphas_deg[ai], scores[cell]};
        if (scores[cell] < scores[best_cell])
            best_cell = cell; // strict < keeps the smaller (d, alpha) on ties
    }

    report.best.d_half_lambda = grid.d_half_lambda[best_cell / na];
    report.best.alpha_deg = grid.alphas_deg[best_cell % na];
    report.best.wavelength_m = grid.wavelength_m;
    report.best.score = scores[best_cell];
    report.best.curve = std::move(curves[best_cell]);
    return report;
}

void write_score_table_csv(std::ostream &os, const std::vector<ScoreRow> &table)
{
    os << "d_over_halflambda,alpha_deg,mme\n";
    for (const auto &row : table)
        os << fmt_double(row.d_half_lambda) << ',' << fmt_double(row.alpha_deg) << ','
           << fmt_double(row.score) << '\n';
}

void write_score_table_csv(const std::string &path, const std::vector<ScoreRow> &table)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open for writing: " + path);
    write_score_table_csv(os, table);
}

} // namespace mimosim
