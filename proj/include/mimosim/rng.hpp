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
// Splittable deterministic random streams (SplitMix64 core, Box-Muller
// transforms written out explicitly). Nothing here depends on libc or
// libstdc++ distribution internals, so a (seed, tag...) pair produces the
// same bits on every platform and in every evaluation order. Monte-Carlo
// trials, sounding links and fit cells each run on their own derived
// stream; results are therefore independent of worker count and
// scheduling.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace mimosim
{

/// Finalizer of SplitMix64; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Independent child stream seed for (seed, tag).
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag)
{
    return mix64(seed ^ mix64(tag + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
    return derive_stream(derive_stream(seed, a), b);
}

class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0, 1); never returns an endpoint, so
    /// log() in the Gaussian transform is always safe.
    double uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on (lo, hi). With lo == hi every draw is exactly that value.
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    /// Standard normal, Box-Muller. Pairs are generated together; the spare
    /// is handed out on the next call.
    double gaussian()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex Gaussian CN(0, 1): each component
    /// N(0, 1/2). Consumes exactly one Box-Muller pair.
    std::complex<double> complex_gaussian()
    {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-std::log(u1)); // sqrt(-2 ln u) / sqrt(2)
        double a = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mimosim
