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

#include "mimosim/harness/protocol.hpp"

#include <limits>
#include <sstream>

namespace mimosim
{

namespace
{

std::string describe_missing(const std::vector<std::pair<std::size_t, std::size_t>> &missing)
{
    std::ostringstream os;
    os << "incomplete sounding round: " << missing.size() << " missing (slot,rx) pairs:";
    for (const auto &[slot, rx] : missing)
        os << " (" << slot << "," << rx << ")";
    return os.str();
}

} // namespace

IncompleteRoundError::IncompleteRoundError(
    std::vector<std::pair<std::size_t, std::size_t>> missing_pairs)
    : std::runtime_error(describe_missing(missing_pairs)), missing(std::move(missing_pairs))
{
}

const char *to_string(MessageKind kind)
{
    switch (kind)
    {
    case MessageKind::configure: return "CONFIGURE";
    case MessageKind::start: return "START";
    case MessageKind::slot_result: return "SLOT_RESULT";
    case MessageKind::round_done: return "ROUND_DONE";
    case MessageKind::stop: return "STOP";
    case MessageKind::error: return "ERROR";
    }
    return "ERROR";
}

MessageKind kind_from_string(const std::string &name)
{
    if (name == "CONFIGURE") return MessageKind::configure;
    if (name == "START") return MessageKind::start;
    if (name == "SLOT_RESULT") return MessageKind::slot_result;
    if (name == "ROUND_DONE") return MessageKind::round_done;
    if (name == "STOP") return MessageKind::stop;
    if (name == "ERROR") return MessageKind::error;
    throw ProtocolError("unknown message kind '" + name + "'");
}

std::string encode_message(const ControlMessage &msg)
{
    const nlohmann::json j{{"kind", to_string(msg.kind)},
                           {"round_id", msg.round_id},
                           {"unit_id", msg.unit_id},
                           {"payload", msg.payload}};
    return j.dump();
}

ControlMessage decode_message(const std::string &line)
{
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ProtocolError("malformed frame: not a JSON object");
    try
    {
        ControlMessage msg;
        msg.kind = kind_from_string(j.at("kind").get<std::string>());
        msg.round_id = j.at("round_id").get<std::string>();
        msg.unit_id = j.at("unit_id").get<int>();
        msg.payload = j.at("payload");
        return msg;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ProtocolError(std::string("malformed frame: ") + e.what());
    }
}

nlohmann::json complex_to_json(std::complex<double> v)
{
    return nlohmann::json::array({v.real(), v.imag()});
}

std::complex<double> complex_from_json(const nlohmann::json &j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ProtocolError("complex value must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json unit_config_to_json(const UnitConfig &cfg)
{
    nlohmann::json gains = nlohmann::json::array();
    for (std::size_t r = 0; r < cfg.gains.n_rows; ++r)
    {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < cfg.gains.n_cols; ++c)
            row.push_back(complex_to_json(cfg.gains(r, c)));
        gains.push_back(std::move(row));
    }

    return nlohmann::json{
        {"num_tx", cfg.num_tx},
        {"schedule", schedule_to_json(cfg.schedule)},
        {"pn", {{"degree", cfg.pn_degree}, {"taps", cfg.pn_taps}, {"state", cfg.pn_state}}},
        {"imp",
         {{"snr_db", cfg.imp.noiseless() ? nlohmann::json(nullptr) : nlohmann::json(cfg.imp.snr_db)},
          {"cfo_hz", cfg.imp.cfo_hz ? nlohmann::json(*cfg.imp.cfo_hz) : nlohmann::json(nullptr)},
          {"sample_rate_hz", cfg.imp.sample_rate_hz}}},
        {"round_seed", cfg.round_seed},
        {"rx_antennas", cfg.rx_antennas},
        {"gains", std::move(gains)}};
}

UnitConfig unit_config_from_json(const nlohmann::json &j)
{
    try
    {
        UnitConfig cfg;
        cfg.num_tx = j.at("num_tx").get<std::size_t>();
        cfg.schedule = schedule_from_json(j.at("schedule"));
        cfg.pn_degree = j.at("pn").at("degree").get<unsigned>();
        cfg.pn_taps = j.at("pn").at("taps").get<std::uint32_t>();
        cfg.pn_state = j.at("pn").at("state").get<std::uint64_t>();

        const auto &imp = j.at("imp");
        cfg.imp.snr_db = imp.at("snr_db").is_null()
                             ? std::numeric_limits<double>::infinity()
                             : imp.at("snr_db").get<double>();
        if (!imp.at("cfo_hz").is_null())
            cfg.imp.cfo_hz = imp.at("cfo_hz").get<double>();
        cfg.imp.sample_rate_hz = imp.at("sample_rate_hz").get<double>();

        cfg.round_seed = j.at("round_seed").get<std::uint64_t>();
        cfg.rx_antennas = j.at("rx_antennas").get<std::vector<std::size_t>>();

        const auto &gains = j.at("gains");
        if (!gains.is_array() || gains.size() != cfg.rx_antennas.size())
            throw ProtocolError("configure: one gain row per owned receive antenna required");
        cfg.gains.set_size(cfg.rx_antennas.size(), cfg.num_tx);
        for (std::size_t r = 0; r < gains.size(); ++r)
        {
            const auto &row = gains[r];
            if (!row.is_array() || row.size() != cfg.num_tx)
                throw ProtocolError("configure: gain row length must equal num_tx");
            for (std::size_t c = 0; c < cfg.num_tx; ++c)
                cfg.gains(r, c) = complex_from_json(row[c]);
        }
        return cfg;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ProtocolError(std::string("malformed configure payload: ") + e.what());
    }
}

nlohmann::json slot_result_to_json(const SlotResult &r)
{
    return nlohmann::json{{"slot", r.slot}, {"rx", r.rx}, {"gain", complex_to_json(r.gain)}};
}

SlotResult slot_result_from_json(const nlohmann::json &j)
{
    try
    {
        SlotResult r;
        r.slot = j.at("slot").get<std::size_t>();
        r.rx = j.at("rx").get<std::size_t>();
        r.gain = complex_from_json(j.at("gain"));
        return r;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ProtocolError(std::string("malformed slot result: ") + e.what());
    }
}

} // namespace mimosim
