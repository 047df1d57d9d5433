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

#include "mimosim/util.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <thread>

namespace mimosim
{

std::string fmt_double(double v)
{
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s)
{
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a valid number: '" + std::string(s) + "'");
    return v;
}

std::size_t parse_size(std::string_view s)
{
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a valid count: '" + std::string(s) + "'");
    return v;
}

std::vector<std::string> split_csv(std::string_view line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true)
    {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos)
        {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string fmt_duration_ms(double ms)
{
    if (ms < 1000.0)
        return fmt_double(ms) + " ms";
    return fmt_double(ms / 1000.0) + " s";
}

void parallel_for_chunks(std::size_t count, unsigned workers,
                         const std::function<void(std::size_t, std::size_t)> &fn)
{
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    if (count == 0)
        return;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers == 1)
    {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t base = count / workers, rem = count % workers, begin = 0;
    for (unsigned w = 0; w < workers; ++w)
    {
        std::size_t len = base + (w < rem ? 1 : 0);
        pool.emplace_back(fn, begin, begin + len);
        begin += len;
    }
    for (auto &t : pool)
        t.join();
}

} // namespace mimosim
