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
// Central control process of the emulated testbed. It owns the
// ground-truth channel, hands every baseband unit its antenna subset and
// link gains, starts the round, collects SLOT_RESULT messages from all
// connections and assembles the estimated channel matrix. Results are
// bit-identical to the in-process pipeline for the same config and seed.

#pragma once

#include "mimosim/harness/pipeline.hpp"
#include "mimosim/harness/protocol.hpp"

#include <string>
#include <vector>

namespace mimosim
{

struct ControllerOptions
{
    std::vector<std::string> endpoints;                  ///< one "host:port" per unit
    std::vector<std::vector<std::size_t>> rx_partition;  ///< optional explicit antenna split
    int timeout_ms = 30000;                              ///< round collection deadline
};

/// Near-even contiguous split of num_rx antennas across num_units units.
std::vector<std::vector<std::size_t>> partition_rx(std::size_t num_rx, std::size_t num_units);

/// Builds the estimated matrix from collected (slot, rx, gain) results.
/// Pure assembly; arrival order cannot matter.
arma::cx_mat assemble_estimate(const TdmaSchedule &schedule, std::size_t num_rx,
                               const std::vector<SlotResult> &results);

/// Runs one distributed sounding round. Throws ConnectionError (naming the
/// endpoint), IncompleteRoundError (listing missing pairs) or ProtocolError.
/// If out_dir is non-empty, writes the same artifacts as run_pipeline.
PipelineResult run_controller(const ExperimentConfig &cfg, const ControllerOptions &opts,
                              const std::string &out_dir = "");

} // namespace mimosim
