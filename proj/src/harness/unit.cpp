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

#include "mimosim/harness/unit.hpp"

#include "mimosim/harness/protocol.hpp"
#include "mimosim/sounding.hpp"

#include <optional>
#include <string>

namespace mimosim
{

namespace
{

void send_error(net::TcpStream &stream, const std::string &round_id, int unit_id,
                const std::string &message)
{
    ControlMessage msg;
    msg.kind = MessageKind::error;
    msg.round_id = round_id;
    msg.unit_id = unit_id;
    msg.payload = {{"message", message}};
    try
    {
        stream.send_line(encode_message(msg));
    }
    catch (const ConnectionError &)
    {
        // peer already gone; nothing else to report to
    }
}

} // namespace

UnitExit run_unit(net::TcpListener &listener, const UnitOptions &opts)
{
    auto accepted = listener.accept(opts.accept_timeout_ms);
    if (!accepted)
        return UnitExit::fault; // nobody connected
    net::TcpStream stream = std::move(*accepted);

    std::optional<UnitConfig> config;
    std::optional<PnSequence> pn;
    int unit_id = -1;
    std::string configured_round;
    std::string completed_round; // rounds answered with ROUND_DONE (START idempotency)
    int results_sent = 0;

    while (true)
    {
        const auto line = stream.recv_line(opts.recv_timeout_ms);
        if (!line)
            return stream.eof() ? UnitExit::clean : UnitExit::fault; // EOF or idle timeout

        ControlMessage msg;
        try
        {
            msg = decode_message(*line);
        }
        catch (const ProtocolError &e)
        {
            send_error(stream, configured_round, unit_id, e.what());
            stream.close();
            return UnitExit::fault;
        }

        switch (msg.kind)
        {
        case MessageKind::configure:
            try
            {
                config = unit_config_from_json(msg.payload);
                pn = gen_pn(config->pn_degree, config->pn_taps, config->pn_state);
                unit_id = msg.unit_id;
                configured_round = msg.round_id;
                completed_round.clear();
                results_sent = 0;
            }
            catch (const std::exception &e)
            {
                send_error(stream, msg.round_id, msg.unit_id, e.what());
                stream.close();
                return UnitExit::fault;
            }
            break;

        case MessageKind::start:
        {
            if (!config || msg.round_id != configured_round)
            {
                send_error(stream, msg.round_id, unit_id, "START without matching CONFIGURE");
                stream.close();
                return UnitExit::fault;
            }
            if (msg.round_id == completed_round)
            {
                // duplicate START: results were already sent once; just re-ack
                ControlMessage done;
                done.kind = MessageKind::round_done;
                done.round_id = msg.round_id;
                done.unit_id = unit_id;
                stream.send_line(encode_message(done));
                break;
            }

            const auto tx_of_slot = config->schedule.slot_to_tx();
            for (std::size_t slot = 0; slot < config->num_tx; ++slot)
            {
                const std::size_t tx = tx_of_slot[slot];
                for (std::size_t local = 0; local < config->rx_antennas.size(); ++local)
                {
                    if (opts.die_after >= 0 && results_sent >= opts.die_after)
                    {
                        stream.close(); // emulate a crash mid-round
                        return UnitExit::injected_fail;
                    }
                    const std::size_t rx = config->rx_antennas[local];
                    SlotResult r;
                    r.slot = slot;
                    r.rx = rx;
                    r.gain = simulate_link(*pn, config->gains(local, tx), config->imp,
                                           link_seed(config->round_seed, slot, rx));

                    ControlMessage out;
                    out.kind = MessageKind::slot_result;
                    out.round_id = msg.round_id;
                    out.unit_id = unit_id;
                    out.payload = slot_result_to_json(r);
                    stream.send_line(encode_message(out));
                    ++results_sent;
                }
            }
            completed_round = msg.round_id;

            ControlMessage done;
            done.kind = MessageKind::round_done;
            done.round_id = msg.round_id;
            done.unit_id = unit_id;
            stream.send_line(encode_message(done));
            break;
        }

        case MessageKind::stop:
        {
            ControlMessage ack;
            ack.kind = MessageKind::stop;
            ack.round_id = msg.round_id;
            ack.unit_id = unit_id;
            try
            {
                stream.send_line(encode_message(ack));
            }
            catch (const ConnectionError &)
            {
            }
            return UnitExit::clean;
        }

        case MessageKind::slot_result:
        case MessageKind::round_done:
        case MessageKind::error:
            send_error(stream, msg.round_id, unit_id,
                       std::string("unexpected message kind ") + to_string(msg.kind));
            stream.close();
            return UnitExit::fault;
        }
    }
}

} // namespace mimosim
