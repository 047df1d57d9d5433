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

#include "mimosim/harness/controller.hpp"

#include "mimosim/harness/net.hpp"

#include <algorithm>
#include <chrono>
#include <poll.h>
#include <stdexcept>

namespace mimosim
{

std::vector<std::vector<std::size_t>> partition_rx(std::size_t num_rx, std::size_t num_units)
{
    if (num_units < 1)
        throw std::invalid_argument("partition_rx: need at least one unit");
    if (num_units > num_rx)
        throw std::invalid_argument("partition_rx: more units than receive antennas");
    std::vector<std::vector<std::size_t>> parts(num_units);
    for (std::size_t u = 0; u < num_units; ++u)
    {
        const std::size_t begin = u * num_rx / num_units;
        const std::size_t end = (u + 1) * num_rx / num_units;
        for (std::size_t rx = begin; rx < end; ++rx)
            parts[u].push_back(rx);
    }
    return parts;
}

arma::cx_mat assemble_estimate(const TdmaSchedule &schedule, std::size_t num_rx,
                               const std::vector<SlotResult> &results)
{
    schedule.validate();
    const auto tx_of_slot = schedule.slot_to_tx();
    arma::cx_mat est(num_rx, schedule.num_tx, arma::fill::zeros);
    std::vector<bool> seen(num_rx * schedule.num_tx, false);
    for (const auto &r : results)
    {
        if (r.slot >= schedule.num_tx || r.rx >= num_rx)
            throw ProtocolError("slot result outside the scheme dimensions");
        const std::size_t key = r.slot * num_rx + r.rx;
        if (seen[key])
            continue; // count duplicates once
        seen[key] = true;
        est(r.rx, tx_of_slot[r.slot]) = r.gain;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
    {
        std::vector<std::pair<std::size_t, std::size_t>> missing;
        for (std::size_t slot = 0; slot < schedule.num_tx; ++slot)
            for (std::size_t rx = 0; rx < num_rx; ++rx)
                if (!seen[slot * num_rx + rx])
                    missing.emplace_back(slot, rx);
        throw IncompleteRoundError(std::move(missing));
    }
    return est;
}

namespace
{

struct UnitLink
{
    net::TcpStream stream;
    std::vector<std::size_t> rx_antennas;
    bool done = false;
    bool dead = false;
};

void validate_partition(const std::vector<std::vector<std::size_t>> &parts, std::size_t num_rx)
{
    std::vector<bool> covered(num_rx, false);
    for (const auto &part : parts)
        for (std::size_t rx : part)
        {
            if (rx >= num_rx || covered[rx])
                throw std::invalid_argument(
                    "rx partition must cover each receive antenna exactly once");
            covered[rx] = true;
        }
    if (std::find(covered.begin(), covered.end(), false) != covered.end())
        throw std::invalid_argument("rx partition must cover each receive antenna exactly once");
}

} // namespace

PipelineResult run_controller(const ExperimentConfig &cfg, const ControllerOptions &opts,
                              const std::string &out_dir)
{
    cfg.validate();
    if (opts.endpoints.empty())
        throw std::invalid_argument("controller: need at least one unit endpoint");

    const std::size_t num_units = opts.endpoints.size();
    const std::size_t num_rx = cfg.scheme_size;
    auto partition = opts.rx_partition.empty() ? partition_rx(num_rx, num_units) : opts.rx_partition;
    if (partition.size() != num_units)
        throw std::invalid_argument("controller: one partition entry per endpoint required");
    validate_partition(partition, num_rx);

    PipelineResult result;
    result.h_true = make_truth_channel(cfg);
    const TdmaSchedule schedule = build_tdma_schedule(cfg.scheme_size, cfg.slot_ms);
    gen_pn(cfg.pn_degree, cfg.pn_taps, cfg.pn_state); // reject bad PN config before any I/O

    const std::string round_id = "round-" + std::to_string(cfg.seed);

    std::vector<UnitLink> units(num_units);
    for (std::size_t u = 0; u < num_units; ++u)
    {
        units[u].stream = net::TcpStream::connect(opts.endpoints[u]);
        units[u].rx_antennas = partition[u];
    }

    // CONFIGURE carries each unit's antenna subset and true link gains.
    for (std::size_t u = 0; u < num_units; ++u)
    {
        UnitConfig ucfg;
        ucfg.num_tx = cfg.scheme_size;
        ucfg.schedule = schedule;
        ucfg.pn_degree = cfg.pn_degree;
        ucfg.pn_taps = cfg.pn_taps;
        ucfg.pn_state = cfg.pn_state;
        ucfg.imp = cfg.impairments();
        ucfg.round_seed = round_seed(cfg);
        ucfg.rx_antennas = units[u].rx_antennas;
        ucfg.gains.set_size(units[u].rx_antennas.size(), cfg.scheme_size);
        for (std::size_t r = 0; r < units[u].rx_antennas.size(); ++r)
            ucfg.gains.row(r) = result.h_true.row(units[u].rx_antennas[r]);

        ControlMessage msg;
        msg.kind = MessageKind::configure;
        msg.round_id = round_id;
        msg.unit_id = static_cast<int>(u);
        msg.payload = unit_config_to_json(ucfg);
        units[u].stream.send_line(encode_message(msg));
    }
    for (std::size_t u = 0; u < num_units; ++u)
    {
        ControlMessage msg;
        msg.kind = MessageKind::start;
        msg.round_id = round_id;
        msg.unit_id = static_cast<int>(u);
        units[u].stream.send_line(encode_message(msg));
    }

    // Collect SLOT_RESULTs until the round is complete, every unit is done
    // or lost, or the deadline passes. Arrival order is erased by the
    // assembly step.
    const std::size_t expected = cfg.scheme_size * num_rx;
    std::vector<SlotResult> results;
    results.reserve(expected);
    std::vector<bool> seen(expected, false);
    std::size_t received = 0;

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(opts.timeout_ms);
    auto handle_line = [&](UnitLink &unit, const std::string &line) {
        const ControlMessage msg = decode_message(line);
        switch (msg.kind)
        {
        case MessageKind::slot_result:
        {
            const SlotResult r = slot_result_from_json(msg.payload);
            if (r.slot >= cfg.scheme_size || r.rx >= num_rx)
                throw ProtocolError("slot result outside the scheme dimensions");
            const std::size_t key = r.slot * num_rx + r.rx;
            if (!seen[key])
            {
                seen[key] = true;
                ++received;
            }
            results.push_back(r);
            break;
        }
        case MessageKind::round_done:
            unit.done = true;
            break;
        case MessageKind::error:
            throw ProtocolError("unit reported error: " +
                                msg.payload.value("message", std::string("unknown")));
        case MessageKind::stop: // benign STOP acknowledgement
            break;
        default:
            throw ProtocolError(std::string("unexpected message kind ") + to_string(msg.kind));
        }
    };

    while (received < expected)
    {
        // Drain buffered lines first; poll only when everyone is idle.
        bool drained_any = false;
        for (auto &unit : units)
        {
            while (auto line = unit.stream.pop_line())
            {
                handle_line(unit, *line);
                drained_any = true;
            }
        }
        if (received >= expected)
            break;
        if (drained_any)
            continue;

        const bool all_settled =
            std::all_of(units.begin(), units.end(),
                        [](const UnitLink &u) { return u.done || u.dead || u.stream.eof(); });
        if (all_settled)
            break;

        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline)
            break;
        const int wait_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1);

        std::vector<pollfd> pfds;
        std::vector<std::size_t> pfd_unit;
        for (std::size_t u = 0; u < num_units; ++u)
            if (!units[u].dead && !units[u].stream.eof() && !units[u].done)
            {
                pfds.push_back({units[u].stream.fd(), POLLIN, 0});
                pfd_unit.push_back(u);
            }
        if (pfds.empty())
            break;
        const int rc = ::poll(pfds.data(), pfds.size(), wait_ms);
        if (rc < 0 && errno != EINTR)
            throw ConnectionError("poll failed while collecting results");
        for (std::size_t i = 0; i < pfds.size(); ++i)
            if (pfds[i].revents & (POLLIN | POLLHUP | POLLERR))
                if (!units[pfd_unit[i]].stream.read_available())
                    units[pfd_unit[i]].dead = true;
    }

    if (received < expected)
    {
        std::vector<std::pair<std::size_t, std::size_t>> missing;
        for (std::size_t slot = 0; slot < cfg.scheme_size; ++slot)
            for (std::size_t rx = 0; rx < num_rx; ++rx)
                if (!seen[slot * num_rx + rx])
                    missing.emplace_back(slot, rx);
        throw IncompleteRoundError(std::move(missing));
    }

    for (std::size_t u = 0; u < num_units; ++u)
    {
        if (units[u].dead || units[u].stream.eof())
            continue;
        ControlMessage msg;
        msg.kind = MessageKind::stop;
        msg.round_id = round_id;
        msg.unit_id = static_cast<int>(u);
        try
        {
            units[u].stream.send_line(encode_message(msg));
        }
        catch (const ConnectionError &)
        {
            // unit already gone; the round is complete regardless
        }
    }

    result.h_estimated = assemble_estimate(schedule, num_rx, results);
    result.report = summarize_round(cfg, result.h_true, result.h_estimated, num_units);
    if (!out_dir.empty())
        write_round_artifacts(cfg, result, out_dir, "emulate-controller");
    return result;
}

} // namespace mimosim
