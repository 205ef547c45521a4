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

// Threshold detection on a delay-Doppler map: local maxima above the
// threshold, gate assignment and parabolic peak refinement.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nfisac/radar/echo.hpp"
#include "nfisac/radar/map.hpp"

namespace nfisac {

/// Window of +-k_half range bins and +-q_half Doppler bins around a centre,
/// wrapping circularly on both axes.
struct Gate {
    int k_center = 0;
    int q_center = 0;
    int k_half = 1;
    int q_half = 1;

    bool contains(int k, int q, int n_range, int n_doppler) const
    {
        auto circ = [](int a, int b, int n) {
            const int d = ((a - b) % n + n) % n;
            return std::min(d, n - d);
        };
        return circ(k, k_center, n_range) <= k_half && circ(q, q_center, n_doppler) <= q_half;
    }
};

/// Gate at the bins predicted for a target (nearest bin on each axis).
inline Gate gate_for_target(const DelayDopplerMap& map, const SensingTarget& t, int half_width = 1)
{
    const int K = map.n_range_bins();
    const int Q = map.n_doppler_bins();
    const auto k = static_cast<long long>(std::lround(t.location.range_m / map.range_per_bin));
    const auto q = static_cast<long long>(std::lround(t.velocity_mps / map.velocity_per_bin));
    return {static_cast<int>(((k % K) + K) % K), static_cast<int>(((q % Q) + Q) % Q), half_width, half_width};
}

struct Detection {
    int range_bin = 0;
    int doppler_bin = 0;
    double value = 0.0;
    double range_m = 0.0;
    double velocity_mps = 0.0;
    int gate = -1; ///< index of the containing gate, -1 for a false alarm

    bool false_alarm() const { return gate < 0; }
};

struct DetectionReport {
    std::vector<Detection> detections;
    double threshold = 0.0;

    int n_false_alarms() const
    {
        return static_cast<int>(std::count_if(detections.begin(), detections.end(),
                                              [](const Detection& d) { return d.false_alarm(); }));
    }

    /// Strongest detection assigned to gate g, or nullptr.
    const Detection* best_in_gate(int g) const
    {
        const Detection* best = nullptr;
        for (const auto& d : detections)
            if (d.gate == g && (!best || d.value > best->value))
                best = &d;
        return best;
    }
};

struct TargetEstimate {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double range_offset_bins = 0.0;
    double doppler_offset_bins = 0.0;
};

namespace detail {

/// Vertex offset of a parabola through (-1, a), (0, b), (1, c), clamped to
/// [-0.5, 0.5].
inline double parabolic_offset(double a, double b, double c)
{
    const double den = a - 2.0 * b + c;
    if (!(den < 0.0))
        return 0.0;
    return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

/// log(x) floored 120 dB below the peak, so round-off in the nulls beside an
/// exactly on-bin peak cannot tilt the parabola.
inline double floored_log(double x, double peak)
{
    return std::log(std::max({x, 1e-12 * peak, std::numeric_limits<double>::min()}));
}

} // namespace detail

/// Range axis is linear (no wrap at the edges); the Doppler axis is circular.
inline TargetEstimate estimate_target(const DelayDopplerMap& map, int k, int q)
{
    const int K = map.n_range_bins();
    const int Q = map.n_doppler_bins();
    const auto& z = map.values;
    TargetEstimate e;
    if (k > 0 && k < K - 1)
        e.range_offset_bins = detail::parabolic_offset(detail::floored_log(z(k - 1, q), z(k, q)),
                                                       detail::floored_log(z(k, q), z(k, q)),
                                                       detail::floored_log(z(k + 1, q), z(k, q)));
    if (Q >= 3)
        e.doppler_offset_bins = detail::parabolic_offset(detail::floored_log(z(k, (q + Q - 1) % Q), z(k, q)),
                                                         detail::floored_log(z(k, q), z(k, q)),
                                                         detail::floored_log(z(k, (q + 1) % Q), z(k, q)));
    e.range_m = map.range_m(k + e.range_offset_bins);
    e.velocity_mps = map.velocity_mps(map.signed_doppler(q) + e.doppler_offset_bins);
    return e;
}

inline TargetEstimate estimate_target(const DelayDopplerMap& map, const Detection& d)
{
    return estimate_target(map, d.range_bin, d.doppler_bin);
}

/// A cell is a local maximum when it beats every distinct cell of its
/// circular 8-neighbourhood, with equal values resolved in favour of the
/// lexicographically smaller (k, q).
inline bool is_local_max(const RMatrix& z, int k, int q)
{
    const auto K = static_cast<int>(z.rows());
    const auto Q = static_cast<int>(z.cols());
    const double v = z(k, q);
    for (int dk = -1; dk <= 1; ++dk)
        for (int dq = -1; dq <= 1; ++dq) {
            const int kk = (k + dk + K) % K;
            const int qq = (q + dq + Q) % Q;
            if (kk == k && qq == q)
                continue;
            const double u = z(kk, qq);
            if (u > v || (u == v && (kk < k || (kk == k && qq < q))))
                return false;
        }
    return true;
}

/// Detections in (k, q) lexicographic order, each assigned to the first
/// gate that contains it.
inline DetectionReport detect(const DelayDopplerMap& map, double threshold, const std::vector<Gate>& gates)
{
    if (!(threshold > 0.0))
        throw std::invalid_argument("detect: threshold must be positive");
    DetectionReport rep;
    rep.threshold = threshold;
    const int K = map.n_range_bins();
    const int Q = map.n_doppler_bins();
    for (int k = 0; k < K; ++k)
        for (int q = 0; q < Q; ++q) {
            if (!(map.values(k, q) > threshold) || !is_local_max(map.values, k, q))
                continue;
            Detection d;
            d.range_bin = k;
            d.doppler_bin = q;
            d.value = map.values(k, q);
            const auto est = estimate_target(map, k, q);
            d.range_m = est.range_m;
            d.velocity_mps = est.velocity_mps;
            for (std::size_t g = 0; g < gates.size(); ++g)
                if (gates[g].contains(k, q, K, Q)) {
                    d.gate = static_cast<int>(g);
                    break;
                }
            rep.detections.push_back(d);
        }
    return rep;
}

} // namespace nfisac
