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
// Emulated baseband processing unit: serves one controller connection,
// simulates reception for its receive antennas slot by slot and streams
// the per-link gain estimates back. Stateless across rounds; the
// controller supplies everything in CONFIGURE.

#pragma once

#include "mimosim/harness/net.hpp"

namespace mimosim
{

struct UnitOptions
{
    /// Fault injection: abruptly drop the connection (emulating a crashed
    /// unit) after this many SLOT_RESULT messages. -1 disables.
    int die_after = -1;
    /// How long to wait for a controller connection before giving up.
    int accept_timeout_ms = 30000;
    /// Idle timeout while waiting for controller messages.
    int recv_timeout_ms = 30000;
};

enum class UnitExit
{
    clean,        ///< STOP acknowledged or controller disconnected
    fault,        ///< protocol/configuration error (ERROR sent when possible)
    injected_fail ///< --die-after fault injection tripped
};

/// Serves exactly one controller session on the listener.
UnitExit run_unit(net::TcpListener &listener, const UnitOptions &opts = {});

} // namespace mimosim
