// SPDX-License-Identifier: Apache-2.0
//
// nfisac: near-field wideband ISAC beamforming simulation library
// Copyright (C) 2026 The nfisac authors
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

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "nfisac/core/types.hpp"

namespace nfisac {

using Rng = std::mt19937_64;

/// splitmix64 finaliser
inline constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based seed derivation: derive_seed(master, {trial, stream, ...}).
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t s = mix64(master);
    for (auto k : keys)
        s = mix64(s ^ mix64(k + 0x632be59bd9b4e019ULL));
    return s;
}

/// Stream identifiers used with derive_seed.
namespace stream {
inline constexpr std::uint64_t kTarget = 1;
inline constexpr std::uint64_t kClutter = 2;
inline constexpr std::uint64_t kEcho = 3;
inline constexpr std::uint64_t kCalibration = 4;
inline constexpr std::uint64_t kCommChannel = 5;
inline constexpr std::uint64_t kFrame = 6;
inline constexpr std::uint64_t kRefine = 7;
inline constexpr std::uint64_t kLocation = 8;
} // namespace stream

inline double uniform(Rng& rng, double lo, double hi)
{
    if (lo == hi)
        return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline cdouble complex_normal(Rng& rng, double variance = 1.0)
{
    const double s = std::sqrt(0.5 * variance);
    std::normal_distribution<double> nd(0.0, 1.0);
    const double re = nd(rng);
    const double im = nd(rng);
    return {s * re, s * im};
}

} // namespace nfisac
