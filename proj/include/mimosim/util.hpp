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

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mimosim
{

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light_mps = 299792458.0;

/// Shortest decimal representation that round-trips to the same double.
/// All text artifacts go through this so rewriting a file from the same
/// data is byte-identical.
std::string fmt_double(double v);

/// Strict double parser (whole string must be consumed).
double parse_double(std::string_view s);

std::size_t parse_size(std::string_view s);

/// Split a CSV line on ','. No quoting; the file formats here never need it.
std::vector<std::string> split_csv(std::string_view line);

/// "200 ms" below one second, "1.5 s" from there on.
std::string fmt_duration_ms(double ms);

/// Run fn(begin, end) over [0, count) split into contiguous chunks across
/// `workers` threads (0 = hardware concurrency). Callers that need
/// deterministic results must write to per-index slots and reduce after the
/// join; the chunking itself never changes what is computed.
void parallel_for_chunks(std::size_t count, unsigned workers,
                         const std::function<void(std::size_t, std::size_t)> &fn);

} // namespace mimosim
