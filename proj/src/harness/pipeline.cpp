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

#include "mimosim/harness/pipeline.hpp"

#include "mimosim/rng.hpp"
#include "mimosim/util.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mimosim
{

double ExperimentConfig::wavelength_m() const
{
    return speed_of_light_mps / carrier_hz;
}

ChannelEnsemble ExperimentConfig::truth_ensemble() const
{
    switch (truth_kind)
    {
    case ChannelEnsemble::Kind::gaussian:
        return ChannelEnsemble::gaussian();
    case ChannelEnsemble::Kind::uniform_phase:
        return ChannelEnsemble::uniform_phase();
    case ChannelEnsemble::Kind::vandermonde:
        return ChannelEnsemble::vandermonde(0.5 * wavelength_m() * truth_d_half_lambda,
                                            wavelength_m(), truth_alpha_deg * pi / 180.0);
    }
    throw std::invalid_argument("experiment config: unknown ensemble kind");
}

ImpairmentSpec ExperimentConfig::impairments() const
{
    ImpairmentSpec imp;
    imp.snr_db = snr_db;
    imp.cfo_hz = cfo_hz;
    imp.sample_rate_hz = sample_rate_hz;
    return imp;
}

void ExperimentConfig::validate() const
{
    if (scheme_size < 1)
        throw std::invalid_argument("experiment config: scheme size must be >= 1");
    if (!(slot_ms > 0.0))
        throw std::invalid_argument("experiment config: slot duration must be > 0");
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("experiment config: carrier frequency must be > 0");
    if (!std::isfinite(capacity_snr_db))
        throw std::invalid_argument("experiment config: capacity SNR must be finite");
    if (truth_kind == ChannelEnsemble::Kind::vandermonde)
    {
        if (truth_d_half_lambda < 0.0)
            throw std::invalid_argument("experiment config: spacing must be >= 0");
        if (truth_alpha_deg < 0.0 || truth_alpha_deg > 90.0)
            throw std::invalid_argument("experiment config: alpha must lie in [0, 90] degrees");
    }
    impairments().validate();
}

namespace
{

std::string kind_name(ChannelEnsemble::Kind kind)
{
    switch (kind)
    {
    case ChannelEnsemble::Kind::gaussian: return "gaussian";
    case ChannelEnsemble::Kind::vandermonde: return "vandermonde";
    case ChannelEnsemble::Kind::uniform_phase: return "uniform_phase";
    }
    return "gaussian";
}

ChannelEnsemble::Kind kind_by_name(const std::string &name)
{
    if (name == "gaussian") return ChannelEnsemble::Kind::gaussian;
    if (name == "vandermonde") return ChannelEnsemble::Kind::vandermonde;
    if (name == "uniform_phase") return ChannelEnsemble::Kind::uniform_phase;
    throw std::invalid_argument("unknown ensemble kind '" + name + "'");
}

} // namespace

nlohmann::json experiment_config_to_json(const ExperimentConfig &cfg)
{
    nlohmann::json ensemble{{"kind", kind_name(cfg.truth_kind)}};
    if (cfg.truth_kind == ChannelEnsemble::Kind::vandermonde)
    {
        ensemble["d_half_lambda"] = cfg.truth_d_half_lambda;
        ensemble["alpha_deg"] = cfg.truth_alpha_deg;
    }
    return nlohmann::json{
        {"scheme_size", cfg.scheme_size},
        {"snr_db", std::isinf(cfg.snr_db) ? nlohmann::json(nullptr) : nlohmann::json(cfg.snr_db)},
        {"slot_ms", cfg.slot_ms},
        {"pn", {{"degree", cfg.pn_degree}, {"taps", cfg.pn_taps}, {"state", cfg.pn_state}}},
        {"carrier_hz", cfg.carrier_hz},
        {"cfo_hz", cfg.cfo_hz ? nlohmann::json(*cfg.cfo_hz) : nlohmann::json(nullptr)},
        {"sample_rate_hz", cfg.sample_rate_hz},
        {"capacity_snr_db", cfg.capacity_snr_db},
        {"ensemble", std::move(ensemble)},
        {"seed", cfg.seed}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json &j)
{
    ExperimentConfig cfg;
    cfg.scheme_size = j.at("scheme_size").get<std::size_t>();
    cfg.snr_db = j.at("snr_db").is_null() ? std::numeric_limits<double>::infinity()
                                          : j.at("snr_db").get<double>();
    cfg.slot_ms = j.at("slot_ms").get<double>();
    cfg.pn_degree = j.at("pn").at("degree").get<unsigned>();
    cfg.pn_taps = j.at("pn").at("taps").get<std::uint32_t>();
    cfg.pn_state = j.at("pn").at("state").get<std::uint64_t>();
    cfg.carrier_hz = j.at("carrier_hz").get<double>();
    if (!j.at("cfo_hz").is_null())
        cfg.cfo_hz = j.at("cfo_hz").get<double>();
    cfg.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    cfg.capacity_snr_db = j.at("capacity_snr_db").get<double>();
    cfg.truth_kind = kind_by_name(j.at("ensemble").at("kind").get<std::string>());
    if (cfg.truth_kind == ChannelEnsemble::Kind::vandermonde)
    {
        cfg.truth_d_half_lambda = j.at("ensemble").at("d_half_lambda").get<double>();
        cfg.truth_alpha_deg = j.at("ensemble").at("alpha_deg").get<double>();
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

nlohmann::json PipelineReport::to_json() const
{
    return nlohmann::json{{"scheme_size", scheme_size},
                          {"round_duration_ms", round_ms},
                          {"round_duration", round_text},
                          {"capacity_snr_linear", capacity_snr},
                          {"capacity_true_bps_hz", capacity_true},
                          {"capacity_estimated_bps_hz", capacity_estimated},
                          {"capacity_rel_error", capacity_rel_error},
                          {"frobenius_rel_error", frobenius_rel_error},
                          {"num_units", num_units}};
}

arma::cx_mat make_truth_channel(const ExperimentConfig &cfg)
{
    return sample_channel(cfg.truth_ensemble(), cfg.scheme_size, cfg.scheme_size,
                          derive_stream(cfg.seed, stream_truth_channel));
}

std::uint64_t round_seed(const ExperimentConfig &cfg)
{
    return derive_stream(cfg.seed, stream_sounding_round);
}

PipelineReport summarize_round(const ExperimentConfig &cfg, const arma::cx_mat &h_true,
                               const arma::cx_mat &h_est, std::size_t num_units)
{
    const TdmaSchedule schedule = build_tdma_schedule(cfg.scheme_size, cfg.slot_ms);

    SignalModelParams params;
    params.snr = cfg.capacity_snr_linear();
    params.num_tx = cfg.scheme_size;

    PipelineReport report;
    report.scheme_size = cfg.scheme_size;
    report.round_ms = schedule.round_ms();
    report.round_text = fmt_duration_ms(schedule.round_ms());
    report.capacity_snr = params.snr;
    report.capacity_true = capacity(h_true, params);
    report.capacity_estimated = capacity(h_est, params);
    report.capacity_rel_error =
        report.capacity_true > 0.0
            ? std::abs(report.capacity_estimated - report.capacity_true) / report.capacity_true
            : std::abs(report.capacity_estimated);
    const double truth_norm = arma::norm(h_true, "fro");
    report.frobenius_rel_error = truth_norm > 0.0
                                     ? arma::norm(h_est - h_true, "fro") / truth_norm
                                     : arma::norm(h_est, "fro");
    report.num_units = num_units;
    return report;
}

void write_round_artifacts(const ExperimentConfig &cfg, const PipelineResult &result,
                           const std::string &out_dir, const std::string &command)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    write_matrix_csv((dir / "h_true.csv").string(), result.h_true);
    write_matrix_csv((dir / "h_est.csv").string(), result.h_estimated);

    {
        std::ofstream os(dir / "schedule.json", std::ios::binary);
        os << schedule_to_json(build_tdma_schedule(cfg.scheme_size, cfg.slot_ms)).dump(2) << '\n';
    }
    {
        std::ofstream os(dir / "report.json", std::ios::binary);
        os << result.report.to_json().dump(2) << '\n';
    }
    write_manifest(out_dir, command, experiment_config_to_json(cfg),
                   {"h_true.csv", "h_est.csv", "schedule.json", "report.json"});
}

PipelineResult run_pipeline(const ExperimentConfig &cfg, const std::string &out_dir)
{
    cfg.validate();

    PipelineResult result;
    result.h_true = make_truth_channel(cfg);

    const TdmaSchedule schedule = build_tdma_schedule(cfg.scheme_size, cfg.slot_ms);
    const PnSequence pn = gen_pn(cfg.pn_degree, cfg.pn_taps, cfg.pn_state);
    result.h_estimated =
        simulate_sounding_round(result.h_true, schedule, pn, cfg.impairments(), round_seed(cfg));

    result.report = summarize_round(cfg, result.h_true, result.h_estimated, 0);
    if (!out_dir.empty())
        write_round_artifacts(cfg, result, out_dir, "pipeline");
    return result;
}

void write_manifest(const std::string &out_dir, const std::string &command,
                    const nlohmann::json &config, const std::vector<std::string> &artifacts)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const nlohmann::json manifest{
        {"tool", "mimosim"}, {"command", command}, {"config", config}, {"artifacts", artifacts}};
    std::ofstream os(fs::path(out_dir) / "run_manifest.json", std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write manifest in " + out_dir);
    os << manifest.dump(2) << '\n';
}

} // namespace mimosim
