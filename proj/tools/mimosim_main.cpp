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
// Command-line front end. Subcommands:
//
//   gen-channel         draw one channel realization, write channel.csv
//   capacity-curve      Monte-Carlo mean capacity vs scheme size
//   sound               one TDMA sounding round over a synthetic channel
//   pipeline            sounding round + capacity report (+ optional fit)
//   fit                 grid-search Vandermonde (d, alpha) against a curve
//   emulate-unit        serve one baseband unit over TCP
//   emulate-controller  drive remote units through a sounding round
//
// Every artifact-producing run also writes run_manifest.json with the full
// configuration; repeating a run with the same configuration reproduces
// every artifact byte for byte.

#include "mimosim/capacity.hpp"
#include "mimosim/channel_models.hpp"
#include "mimosim/fit.hpp"
#include "mimosim/harness/controller.hpp"
#include "mimosim/harness/pipeline.hpp"
#include "mimosim/harness/unit.hpp"
#include "mimosim/sounding.hpp"
#include "mimosim/util.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using namespace mimosim;

namespace
{

std::vector<std::size_t> parse_sizes(const std::string &spec)
{
    std::vector<std::size_t> sizes;
    const auto colon = spec.find(':');
    if (colon != std::string::npos)
    {
        const std::size_t lo = parse_size(spec.substr(0, colon));
        const std::size_t hi = parse_size(spec.substr(colon + 1));
        if (hi < lo)
            throw std::invalid_argument("size range must be low:high");
        for (std::size_t k = lo; k <= hi; ++k)
            sizes.push_back(k);
        return sizes;
    }
    for (const auto &field : split_csv(spec))
        sizes.push_back(parse_size(field));
    return sizes;
}

ChannelEnsemble::Kind ensemble_kind(const std::string &name)
{
    if (name == "gaussian") return ChannelEnsemble::Kind::gaussian;
    if (name == "vandermonde") return ChannelEnsemble::Kind::vandermonde;
    if (name == "uniform-phase" || name == "uniform_phase")
        return ChannelEnsemble::Kind::uniform_phase;
    throw CLI::ValidationError("--ensemble",
                               "must be gaussian, vandermonde or uniform-phase");
}

nlohmann::json ensemble_json(ChannelEnsemble::Kind kind, double d_half_lambda, double alpha_deg)
{
    nlohmann::json j{{"kind", kind == ChannelEnsemble::Kind::gaussian ? "gaussian"
                              : kind == ChannelEnsemble::Kind::vandermonde ? "vandermonde"
                                                                           : "uniform_phase"}};
    if (kind == ChannelEnsemble::Kind::vandermonde)
    {
        j["d_half_lambda"] = d_half_lambda;
        j["alpha_deg"] = alpha_deg;
    }
    return j;
}

ChannelEnsemble make_ensemble(ChannelEnsemble::Kind kind, double d_half_lambda, double alpha_deg,
                              double carrier_hz)
{
    const double lambda = speed_of_light_mps / carrier_hz;
    switch (kind)
    {
    case ChannelEnsemble::Kind::gaussian: return ChannelEnsemble::gaussian();
    case ChannelEnsemble::Kind::uniform_phase: return ChannelEnsemble::uniform_phase();
    case ChannelEnsemble::Kind::vandermonde:
        return ChannelEnsemble::vandermonde(0.5 * lambda * d_half_lambda, lambda,
                                            alpha_deg * pi / 180.0);
    }
    return ChannelEnsemble::gaussian();
}

std::vector<std::vector<std::size_t>> parse_partition(const std::string &spec)
{
    // "0,1;2,3;4,5" -> one antenna list per unit
    std::vector<std::vector<std::size_t>> parts;
    std::size_t start = 0;
    while (start <= spec.size())
    {
        const auto semi = spec.find(';', start);
        const std::string group =
            semi == std::string::npos ? spec.substr(start) : spec.substr(start, semi - start);
        std::vector<std::size_t> antennas;
        for (const auto &field : split_csv(group))
            antennas.push_back(parse_size(field));
        parts.push_back(std::move(antennas));
        if (semi == std::string::npos)
            break;
        start = semi + 1;
    }
    return parts;
}

/// Shared flags for the commands that run a sounding round.
struct RoundFlags
{
    ExperimentConfig cfg;
    std::string ensemble = "gaussian";
    double snr_db = 0.0;
    double cfo_hz = 0.0;
    CLI::Option *snr_opt = nullptr;
    CLI::Option *cfo_opt = nullptr;
    CLI::Option *taps_opt = nullptr;

    void add_to(CLI::App *cmd)
    {
        cmd->add_option("--size", cfg.scheme_size, "scheme size (N_t = N_r)")->required();
        snr_opt = cmd->add_option("--snr-db", snr_db,
                                  "sounding SNR per receive antenna in dB (omit for noiseless)");
        cmd->add_option("--slot-ms", cfg.slot_ms, "TDMA slot duration in ms")
            ->default_val(50.0);
        cmd->add_option("--carrier-hz", cfg.carrier_hz, "carrier frequency in Hz")
            ->default_val(926000000.0);
        cmd->add_option("--pn-degree", cfg.pn_degree, "PN LFSR degree")->default_val(9u);
        taps_opt = cmd->add_option("--pn-taps", cfg.pn_taps,
                                   "feedback polynomial mask (default: built-in primitive)");
        cmd->add_option("--pn-state", cfg.pn_state, "initial LFSR register state")
            ->default_val(std::uint64_t(1));
        cfo_opt = cmd->add_option("--cfo-hz", cfo_hz, "inject carrier frequency offset in Hz");
        cmd->add_option("--sample-rate-hz", cfg.sample_rate_hz, "chip rate in Hz")
            ->default_val(1.0e6);
        cmd->add_option("--capacity-snr-db", cfg.capacity_snr_db,
                        "SNR in dB for the capacity figures in the report")
            ->default_val(10.0);
        cmd->add_option("--ensemble", ensemble,
                        "ground-truth ensemble: gaussian | vandermonde | uniform-phase")
            ->default_val("gaussian");
        cmd->add_option("--d-half-lambda", cfg.truth_d_half_lambda,
                        "truth Vandermonde spacing, units of lambda/2")
            ->default_val(1.0);
        cmd->add_option("--alpha-deg", cfg.truth_alpha_deg,
                        "truth Vandermonde angular spread in degrees")
            ->default_val(30.0);
        cmd->add_option("--seed", cfg.seed, "random seed")->default_val(std::uint64_t(1));
    }

    ExperimentConfig resolve()
    {
        cfg.truth_kind = ensemble_kind(ensemble);
        cfg.snr_db = snr_opt->count() ? snr_db : std::numeric_limits<double>::infinity();
        if (cfo_opt->count())
            cfg.cfo_hz = cfo_hz;
        if (!taps_opt->count())
            cfg.pn_taps = default_primitive_taps(cfg.pn_degree);
        cfg.validate();
        return cfg;
    }
};

void print_report(const PipelineReport &report)
{
    std::cout << "scheme: " << report.scheme_size << "x" << report.scheme_size << "\n"
              << "TDMA round duration: " << report.round_text << " (" << fmt_double(report.round_ms)
              << " ms)\n"
              << "capacity (true):      " << fmt_double(report.capacity_true) << " bits/s/Hz\n"
              << "capacity (estimated): " << fmt_double(report.capacity_estimated)
              << " bits/s/Hz\n"
              << "relative capacity error:  " << fmt_double(report.capacity_rel_error) << "\n"
              << "relative Frobenius error: " << fmt_double(report.frobenius_rel_error) << "\n";
}

struct FitFlags
{
    std::vector<double> d_grid{1.0, 1.1, 1.2, 1.25};
    std::vector<double> alpha_grid_deg{26, 27, 28, 29, 30, 31, 32, 33, 34, 35};
    std::size_t trials = 500;
    unsigned workers = 1;

    void add_to(CLI::App *cmd)
    {
        cmd->add_option("--d-grid", d_grid, "spacing grid, units of lambda/2")
            ->delimiter(',');
        cmd->add_option("--alpha-grid-deg", alpha_grid_deg, "angular spread grid in degrees")
            ->delimiter(',');
        cmd->add_option("--trials", trials, "Monte-Carlo trials per grid cell")
            ->default_val(std::size_t(500));
        cmd->add_option("--workers", workers, "worker threads (result identical for any count)")
            ->default_val(1u);
    }
};

nlohmann::json fit_report_json(const FitReport &report)
{
    return nlohmann::json{{"best",
                           {{"d_half_lambda", report.best.d_half_lambda},
                            {"alpha_deg", report.best.alpha_deg},
                            {"spacing_m", report.best.spacing_m()},
                            {"wavelength_m", report.best.wavelength_m},
                            {"mme", report.best.score}}},
                          {"cells", report.table.size()}};
}

void write_fit_outputs(const std::string &out_dir, const FitReport &report,
                       const CapacityCurve &target_curve)
{
    const fs::path dir(out_dir);
    write_score_table_csv((dir / "score_table.csv").string(), report.table);
    write_curve_csv((dir / "target_curve.csv").string(), target_curve);
    write_curve_csv((dir / "best_fit_curve.csv").string(), report.best.curve);
    std::ofstream os(dir / "fit.json", std::ios::binary);
    os << fit_report_json(report).dump(2) << '\n';
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"TDMA massive MIMO channel sounding and capacity simulation toolkit"};
    app.require_subcommand(1);

    // ---- gen-channel -----------------------------------------------------
    auto *gen = app.add_subcommand("gen-channel", "draw one channel matrix realization");
    std::string gen_ensemble = "gaussian";
    std::size_t gen_size = 4;
    double gen_d = 1.0, gen_alpha = 30.0, gen_carrier = 926000000.0;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "out";
    gen->add_option("--ensemble", gen_ensemble,
                    "gaussian | vandermonde | uniform-phase")->default_val("gaussian");
    gen->add_option("--size", gen_size, "scheme size (square matrix)")->required();
    gen->add_option("--d-half-lambda", gen_d, "Vandermonde spacing, units of lambda/2")
        ->default_val(1.0);
    gen->add_option("--alpha-deg", gen_alpha, "Vandermonde angular spread in degrees")
        ->default_val(30.0);
    gen->add_option("--carrier-hz", gen_carrier, "carrier frequency in Hz")
        ->default_val(926000000.0);
    gen->add_option("--seed", gen_seed, "random seed")->default_val(std::uint64_t(1));
    gen->add_option("--out-dir", gen_out, "output directory")->default_val("out");

    // ---- capacity-curve --------------------------------------------------
    auto *curve_cmd = app.add_subcommand("capacity-curve",
                                         "Monte-Carlo mean capacity vs scheme size");
    std::string cc_ensemble = "gaussian", cc_sizes = "2:30";
    double cc_snr_db = 10.0, cc_d = 1.0, cc_alpha = 30.0, cc_carrier = 926000000.0;
    std::size_t cc_trials = 500;
    std::uint64_t cc_seed = 1;
    unsigned cc_workers = 1;
    std::string cc_out = "out";
    curve_cmd->add_option("--ensemble", cc_ensemble,
                          "gaussian | vandermonde | uniform-phase")->default_val("gaussian");
    curve_cmd->add_option("--sizes", cc_sizes, "scheme sizes, 'lo:hi' or comma list")
        ->default_val("2:30");
    curve_cmd->add_option("--snr-db", cc_snr_db, "SNR in dB")->default_val(10.0);
    curve_cmd->add_option("--trials", cc_trials, "trials per size")->default_val(std::size_t(500));
    curve_cmd->add_option("--d-half-lambda", cc_d, "Vandermonde spacing, units of lambda/2")
        ->default_val(1.0);
    curve_cmd->add_option("--alpha-deg", cc_alpha, "Vandermonde angular spread in degrees")
        ->default_val(30.0);
    curve_cmd->add_option("--carrier-hz", cc_carrier, "carrier frequency in Hz")
        ->default_val(926000000.0);
    curve_cmd->add_option("--seed", cc_seed, "random seed")->default_val(std::uint64_t(1));
    curve_cmd->add_option("--workers", cc_workers, "worker threads")->default_val(1u);
    curve_cmd->add_option("--out-dir", cc_out, "output directory")->default_val("out");

    // ---- sound / pipeline ------------------------------------------------
    auto *sound_cmd = app.add_subcommand("sound", "run one TDMA sounding round");
    RoundFlags sound_flags;
    sound_flags.add_to(sound_cmd);
    std::string sound_out = "out";
    sound_cmd->add_option("--out-dir", sound_out, "output directory")->default_val("out");

    auto *pipe_cmd = app.add_subcommand("pipeline",
                                        "sounding round + capacity report (+ optional fit)");
    RoundFlags pipe_flags;
    pipe_flags.add_to(pipe_cmd);
    std::string pipe_out = "out";
    bool pipe_fit = false;
    FitFlags pipe_fit_flags;
    std::string pipe_fit_sizes = "10,20,30";
    pipe_cmd->add_option("--out-dir", pipe_out, "output directory")->default_val("out");
    pipe_cmd->add_flag("--run-fit", pipe_fit,
                       "fit Vandermonde (d, alpha) to a capacity curve of the truth ensemble");
    pipe_fit_flags.add_to(pipe_cmd);
    pipe_cmd->add_option("--fit-sizes", pipe_fit_sizes, "curve sizes for the fit stage")
        ->default_val("10,20,30");

    // ---- fit ---------------------------------------------------------------
    auto *fit_cmd = app.add_subcommand("fit", "grid-search (d, alpha) against a target curve");
    std::string fit_target, fit_out = "out";
    double fit_carrier = 926000000.0;
    std::uint64_t fit_seed = 1;
    FitFlags fit_flags;
    fit_cmd->add_option("--target", fit_target, "target capacity curve CSV")->required();
    fit_cmd->add_option("--carrier-hz", fit_carrier, "carrier frequency in Hz")
        ->default_val(926000000.0);
    fit_cmd->add_option("--seed", fit_seed, "random seed")->default_val(std::uint64_t(1));
    fit_flags.add_to(fit_cmd);
    fit_cmd->add_option("--out-dir", fit_out, "output directory")->default_val("out");

    // ---- emulate-unit ------------------------------------------------------
    auto *unit_cmd = app.add_subcommand("emulate-unit", "serve one baseband unit over TCP");
    std::string unit_listen = "127.0.0.1:0", unit_port_file;
    UnitOptions unit_opts;
    unit_cmd->add_option("--listen", unit_listen, "listen endpoint host:port (port 0 = ephemeral)")
        ->default_val("127.0.0.1:0");
    unit_cmd->add_option("--port-file", unit_port_file,
                         "write the bound endpoint to this file once listening");
    unit_cmd->add_option("--die-after", unit_opts.die_after,
                         "fault injection: drop the connection after N slot results")
        ->default_val(-1);
    unit_cmd->add_option("--accept-timeout-ms", unit_opts.accept_timeout_ms,
                         "give up if no controller connects in time")
        ->default_val(30000);
    unit_cmd->add_option("--recv-timeout-ms", unit_opts.recv_timeout_ms,
                         "idle timeout while serving")
        ->default_val(30000);

    // ---- emulate-controller ------------------------------------------------
    auto *ctl_cmd = app.add_subcommand("emulate-controller",
                                       "drive remote units through a sounding round");
    RoundFlags ctl_flags;
    ctl_flags.add_to(ctl_cmd);
    std::vector<std::string> ctl_endpoints;
    std::string ctl_partition, ctl_out = "out";
    int ctl_timeout = 30000;
    ctl_cmd->add_option("--endpoints", ctl_endpoints, "unit endpoints host:port")
        ->delimiter(',')
        ->required();
    ctl_cmd->add_option("--partition", ctl_partition,
                        "explicit antenna partition, e.g. '0,1;2,3;4,5' (default: even split)");
    ctl_cmd->add_option("--timeout-ms", ctl_timeout, "round collection deadline")
        ->default_val(30000);
    ctl_cmd->add_option("--out-dir", ctl_out, "output directory")->default_val("out");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*gen)
        {
            const auto kind = ensemble_kind(gen_ensemble);
            const auto h = sample_channel(make_ensemble(kind, gen_d, gen_alpha, gen_carrier),
                                          gen_size, gen_size, gen_seed);
            fs::create_directories(gen_out);
            write_matrix_csv((fs::path(gen_out) / "channel.csv").string(), h);
            write_manifest(gen_out, "gen-channel",
                           {{"ensemble", ensemble_json(kind, gen_d, gen_alpha)},
                            {"size", gen_size},
                            {"carrier_hz", gen_carrier},
                            {"seed", gen_seed}},
                           {"channel.csv"});
            std::cout << "wrote " << (fs::path(gen_out) / "channel.csv").string() << " ("
                      << gen_size << "x" << gen_size << ")\n";
        }
        else if (*curve_cmd)
        {
            const auto kind = ensemble_kind(cc_ensemble);
            const auto sizes = parse_sizes(cc_sizes);
            const double snr = std::pow(10.0, cc_snr_db / 10.0);
            const auto curve =
                capacity_curve(make_ensemble(kind, cc_d, cc_alpha, cc_carrier), sizes, snr,
                               cc_trials, cc_seed, cc_workers);
            fs::create_directories(cc_out);
            write_curve_csv((fs::path(cc_out) / "curve.csv").string(), curve);
            write_manifest(cc_out, "capacity-curve",
                           {{"ensemble", ensemble_json(kind, cc_d, cc_alpha)},
                            {"sizes", sizes},
                            {"snr_db", cc_snr_db},
                            {"trials", cc_trials},
                            {"carrier_hz", cc_carrier},
                            {"seed", cc_seed}},
                           {"curve.csv"});
            std::cout << "wrote " << (fs::path(cc_out) / "curve.csv").string() << " ("
                      << sizes.size() << " sizes, " << cc_trials << " trials each)\n";
        }
        else if (*sound_cmd)
        {
            const auto cfg = sound_flags.resolve();
            const auto result = run_pipeline(cfg, sound_out);
            write_manifest(sound_out, "sound", experiment_config_to_json(cfg),
                           {"h_true.csv", "h_est.csv", "schedule.json", "report.json"});
            print_report(result.report);
        }
        else if (*pipe_cmd)
        {
            const auto cfg = pipe_flags.resolve();
            const auto result = run_pipeline(cfg, pipe_out);
            print_report(result.report);
            if (pipe_fit)
            {
                FitGrid grid;
                grid.d_half_lambda = pipe_fit_flags.d_grid;
                grid.alphas_deg = pipe_fit_flags.alpha_grid_deg;
                grid.wavelength_m = cfg.wavelength_m();
                grid.snr = cfg.capacity_snr_linear();
                grid.trials = pipe_fit_flags.trials;
                grid.sizes = parse_sizes(pipe_fit_sizes);

                const auto target =
                    capacity_curve(cfg.truth_ensemble(), grid.sizes, grid.snr, grid.trials,
                                   derive_stream(cfg.seed, 1001), pipe_fit_flags.workers);
                const auto report =
                    fit_grid(target, grid, derive_stream(cfg.seed, 1002), pipe_fit_flags.workers);
                write_fit_outputs(pipe_out, report, target);
                write_manifest(pipe_out, "pipeline", experiment_config_to_json(cfg),
                               {"h_true.csv", "h_est.csv", "schedule.json", "report.json",
                                "target_curve.csv", "score_table.csv", "best_fit_curve.csv",
                                "fit.json"});
                std::cout << "fit: best (d, alpha) = (" << fmt_double(report.best.d_half_lambda)
                          << " lambda/2, " << fmt_double(report.best.alpha_deg)
                          << " deg), mme = " << fmt_double(report.best.score) << "\n";
            }
        }
        else if (*fit_cmd)
        {
            const auto target = read_curve_csv(fit_target);
            FitGrid grid;
            grid.d_half_lambda = fit_flags.d_grid;
            grid.alphas_deg = fit_flags.alpha_grid_deg;
            grid.wavelength_m = speed_of_light_mps / fit_carrier;
            grid.snr = target.snr;
            grid.trials = fit_flags.trials;
            grid.sizes = target.sizes;

            const auto report = fit_grid(target, grid, fit_seed, fit_flags.workers);
            fs::create_directories(fit_out);
            write_score_table_csv((fs::path(fit_out) / "score_table.csv").string(), report.table);
            {
                std::ofstream os(fs::path(fit_out) / "fit.json", std::ios::binary);
                os << fit_report_json(report).dump(2) << '\n';
            }
            write_curve_csv((fs::path(fit_out) / "best_fit_curve.csv").string(),
                            report.best.curve);
            write_manifest(fit_out, "fit",
                           {{"target", fit_target},
                            {"d_grid", fit_flags.d_grid},
                            {"alpha_grid_deg", fit_flags.alpha_grid_deg},
                            {"trials", fit_flags.trials},
                            {"carrier_hz", fit_carrier},
                            {"seed", fit_seed}},
                           {"score_table.csv", "fit.json", "best_fit_curve.csv"});
            std::cout << "best (d, alpha) = (" << fmt_double(report.best.d_half_lambda)
                      << " lambda/2, " << fmt_double(report.best.alpha_deg)
                      << " deg), mme = " << fmt_double(report.best.score) << "\n";
        }
        else if (*unit_cmd)
        {
            const auto [host, port] = net::parse_endpoint(unit_listen);
            auto listener = net::TcpListener::bind(host, port);
            if (!unit_port_file.empty())
            {
                std::ofstream os(unit_port_file, std::ios::binary);
                os << listener.endpoint() << '\n';
            }
            std::cout << "listening on " << listener.endpoint() << std::endl;
            switch (run_unit(listener, unit_opts))
            {
            case UnitExit::clean: return 0;
            case UnitExit::fault: return 1;
            case UnitExit::injected_fail: return 2;
            }
        }
        else if (*ctl_cmd)
        {
            const auto cfg = ctl_flags.resolve();
            ControllerOptions opts;
            opts.endpoints = ctl_endpoints;
            if (!ctl_partition.empty())
                opts.rx_partition = parse_partition(ctl_partition);
            opts.timeout_ms = ctl_timeout;

            const auto result = run_controller(cfg, opts, ctl_out);
            nlohmann::json config = experiment_config_to_json(cfg);
            config["emulation"] = {{"endpoints", ctl_endpoints},
                                   {"partition", ctl_partition.empty() ? "even" : ctl_partition},
                                   {"timeout_ms", ctl_timeout}};
            write_manifest(ctl_out, "emulate-controller", config,
                           {"h_true.csv", "h_est.csv", "schedule.json", "report.json"});
            print_report(result.report);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
