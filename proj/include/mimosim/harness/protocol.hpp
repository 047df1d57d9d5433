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
// Control-plane wire protocol: one JSON object per line, UTF-8, fields
// {kind, round_id, unit_id, payload}. Complex numbers travel as [re, im]
// pairs. The controller owns the ground-truth channel and hands every unit
// its antenna subset, link gains and impairments in CONFIGURE; units reply
// with one SLOT_RESULT per (slot, rx) pair.

#pragma once

#include "mimosim/sounding.hpp"

#include <armadillo>
#include <complex>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimosim
{

struct ProtocolError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct ConnectionError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// A sounding round that ended with (slot, rx) pairs unaccounted for.
struct IncompleteRoundError : std::runtime_error
{
    std::vector<std::pair<std::size_t, std::size_t>> missing; ///< sorted (slot, rx)

    explicit IncompleteRoundError(std::vector<std::pair<std::size_t, std::size_t>> missing_pairs);
};

enum class MessageKind
{
    configure,
    start,
    slot_result,
    round_done,
    stop,
    error
};

const char *to_string(MessageKind kind);
MessageKind kind_from_string(const std::string &name); // throws ProtocolError

struct ControlMessage
{
    MessageKind kind = MessageKind::error;
    std::string round_id;
    int unit_id = -1;
    nlohmann::json payload = nlohmann::json::object();
};

std::string encode_message(const ControlMessage &msg);
ControlMessage decode_message(const std::string &line); // throws ProtocolError

/// Everything a baseband unit needs to simulate its share of one round.
struct UnitConfig
{
    std::size_t num_tx = 0;
    TdmaSchedule schedule;
    unsigned pn_degree = 9;
    std::uint32_t pn_taps = 0;
    std::uint64_t pn_state = 1;
    ImpairmentSpec imp;
    std::uint64_t round_seed = 0;
    std::vector<std::size_t> rx_antennas; ///< global receive-antenna indices owned by the unit
    arma::cx_mat gains;                   ///< rx_antennas.size() x num_tx true link gains
};

nlohmann::json unit_config_to_json(const UnitConfig &cfg);
UnitConfig unit_config_from_json(const nlohmann::json &j); // throws ProtocolError

struct SlotResult
{
    std::size_t slot = 0;
    std::size_t rx = 0;
    std::complex<double> gain;
};

nlohmann::json slot_result_to_json(const SlotResult &r);
SlotResult slot_result_from_json(const nlohmann::json &j); // throws ProtocolError

nlohmann::json complex_to_json(std::complex<double> v);
std::complex<double> complex_from_json(const nlohmann::json &j);

} // namespace mimosim
