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
// Grid search over Vandermonde geometry (antenna spacing d, angular spread
// alpha) that matches a simulated capacity curve to a target curve by mean
// squared error. Spacings are handled in units of half a wavelength and
// spreads in degrees, the units the grids are naturally written in.

#pragma once

#include "mimosim/capacity.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mimosim
{

/// Search grid plus everything needed to simulate one candidate curve.
struct FitGrid
{
    std::vector<double> d_half_lambda; ///< spacings, units of lambda/2, strictly increasing
    std::vector<double> alphas_deg;    ///< angular spreads, degrees, strictly increasing
    double wavelength_m = 1.0;
    double snr = 10.0; ///< linear, must match the target curve
    std::size_t trials = 500;
    std::vector<std::size_t> sizes; ///< square scheme sizes, must match the target curve

    void validate() const;
};

/// One candidate (d, alpha) with its mean-error score and simulated curve.
struct FitResult
{
    double d_half_lambda = 0.0;
    double alpha_deg = 0.0;
    double wavelength_m = 1.0;
    double score = 0.0;
    CapacityCurve curve;

    double spacing_m() const { return 0.5 * wavelength_m * d_half_lambda; }
    double alpha_rad() const;
};

struct ScoreRow
{
    double d_half_lambda;
    double alpha_deg;
    double score;
};

/// Best cell plus the full score table in (d, alpha) order.
struct FitReport
{
    FitResult best;
    std::vector<ScoreRow> table;
};

/// Mean over sizes of the squared difference of mean capacities. Requires
/// identical size grids and SNR; zero iff the curves agree at every size.
double mme(const CapacityCurve &target, const CapacityCurve &candidate);

/// Minimizes mme over the alpha grid at fixed spacing; ties break toward
/// the smaller alpha.
FitResult fit_alpha(const CapacityCurve &target, double d_half_lambda,
                    const std::vector<double> &alphas_deg, const FitGrid &cfg, std::uint64_t seed);

/// Minimizes mme over the full (d, alpha) grid; ties break toward smaller d
/// then smaller alpha. Cells run on derived seeds and are reduced in
/// (d, alpha) order, so the argmin does not depend on evaluation order or
/// worker count.
FitReport fit_grid(const CapacityCurve &target, const FitGrid &grid, std::uint64_t seed,
                   unsigned workers = 1);

// Score table text format: header "d_over_halflambda,alpha_deg,mme",
// one row per grid cell.
void write_score_table_csv(std::ostream &os, const std::vector<ScoreRow> &table);
void write_score_table_csv(const std::string &path, const std::vector<ScoreRow> &table);

} // namespace mimosim
