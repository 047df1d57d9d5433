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
// End-to-end experiment driver: ground-truth channel -> TDMA sounding
// round -> capacity of truth and estimate -> artifacts on disk. The
// distributed controller reuses every stage except the round itself.

#pragma once

#include "mimosim/capacity.hpp"
#include "mimosim/channel_models.hpp"
#include "mimosim/sounding.hpp"

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace mimosim
{

/// Stream tags for the per-stage seeds derived from ExperimentConfig::seed.
enum : std::uint64_t
{
    stream_truth_channel = 1,
    stream_sounding_round = 2
};

struct ExperimentConfig
{
    std::size_t scheme_size = 4; ///< N_t = N_r
    double snr_db = std::numeric_limits<double>::infinity(); ///< sounding SNR; +inf = noiseless
    double slot_ms = 50.0;
    unsigned pn_degree = 9;
    std::uint32_t pn_taps = 0x21;
    std::uint64_t pn_state = 1;
    double carrier_hz = 926.0e6;
    std::optional<double> cfo_hz;
    double sample_rate_hz = 1.0e6;
    double capacity_snr_db = 10.0; ///< rho used for the capacity figures in the report

    /// Ground-truth ensemble. Vandermonde spacing is kept in lambda/2 units
    /// so the config round-trips through JSON without unit juggling.
    ChannelEnsemble::Kind truth_kind = ChannelEnsemble::Kind::gaussian;
    double truth_d_half_lambda = 1.0;
    double truth_alpha_deg = 30.0;

    std::uint64_t seed = 1;

    double wavelength_m() const;
    double capacity_snr_linear() const { return std::pow(10.0, capacity_snr_db / 10.0); }
    ChannelEnsemble truth_ensemble() const;
    ImpairmentSpec impairments() const;
    void validate() const;
};

nlohmann::json experiment_config_to_json(const ExperimentConfig &cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json &j);

/// Summary of one sounding experiment, serialized to report.json.
struct PipelineReport
{
    std::size_t scheme_size = 0;
    double round_ms = 0.0;
    std::string round_text; ///< e.g. "200 ms" or "1.5 s"
    double capacity_snr = 0.0; ///< linear
    double capacity_true = 0.0;
    double capacity_estimated = 0.0;
    double capacity_rel_error = 0.0;
    double frobenius_rel_error = 0.0;
    std::size_t num_units = 0; ///< 0 for the in-process pipeline

    nlohmann::json to_json() const;
};

struct PipelineResult
{
    arma::cx_mat h_true;
    arma::cx_mat h_estimated;
    PipelineReport report;
};

/// Ground-truth channel drawn from the per-config truth stream.
arma::cx_mat make_truth_channel(const ExperimentConfig &cfg);

/// Seed of the sounding round derived from the config seed.
std::uint64_t round_seed(const ExperimentConfig &cfg);

/// Runs the full in-process experiment. If out_dir is non-empty, writes
/// h_true.csv, h_est.csv, schedule.json, report.json and run_manifest.json
/// there (creating the directory). Byte-identical artifacts for identical
/// configs.
PipelineResult run_pipeline(const ExperimentConfig &cfg, const std::string &out_dir = "");

/// Report + artifact writing shared by the pipeline and the controller.
PipelineReport summarize_round(const ExperimentConfig &cfg, const arma::cx_mat &h_true,
                               const arma::cx_mat &h_est, std::size_t num_units);
void write_round_artifacts(const ExperimentConfig &cfg, const PipelineResult &result,
                           const std::string &out_dir, const std::string &command);

/// run_manifest.json: {command, config, artifacts}; artifact paths are
/// relative to the output directory so reruns in different places compare
/// equal.
void write_manifest(const std::string &out_dir, const std::string &command,
                    const nlohmann::json &config, const std::vector<std::string> &artifacts);

} // namespace mimosim
