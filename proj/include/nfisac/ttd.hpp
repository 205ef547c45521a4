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

// True-time-delay analog baselines: an ideal per-element delay line and a
// hybrid of K quantised sub-array delays plus per-element phase shifters.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nfisac/codebook/classic.hpp"
#include "nfisac/codebook/codeword.hpp"

namespace nfisac {

enum class TtdMode { ideal_full, quantized_subarray };

struct TtdConfig {
    int n_units = 4;
    double resolution_s = 50e-9;
    TtdMode mode = TtdMode::quantized_subarray;

    void validate(int n_elements) const
    {
        if (n_units < 1 || n_units > n_elements)
            throw std::invalid_argument("TtdConfig: need 1 <= K <= N");
        if (mode == TtdMode::quantized_subarray && !(resolution_s > 0.0))
            throw std::invalid_argument("TtdConfig: delay resolution must be positive");
    }
};

inline TtdMode ttd_mode_from_string(std::string_view s)
{
    if (s == "ideal_full")
        return TtdMode::ideal_full;
    if (s == "quantized_subarray")
        return TtdMode::quantized_subarray;
    throw std::invalid_argument("unknown TTD mode '" + std::string(s) + "'");
}

inline std::string_view to_string(TtdMode m) { return m == TtdMode::ideal_full ? "ideal_full" : "quantized_subarray"; }

/// Nearest multiple of step; exact halves go towards zero.
inline double quantize_delay(double tau, double step)
{
    const double u = tau / step;
    const double fl = std::floor(u);
    const double frac = u - fl;
    double q;
    if (frac > 0.5)
        q = fl + 1.0;
    else if (frac < 0.5)
        q = fl;
    else
        q = (u > 0.0) ? fl : fl + 1.0;
    return q * step;
}

/// w[m][n] = exp(+j 2 pi f_m tau_n) / sqrt(N) with tau_n = (r_n - r) / c.
inline FrequencyDependentCodeword ideal_ttd_weights(const ArrayConfig& array, const FrequencyGrid& grid,
                                                    const PolarPoint& focus)
{
    validate_point(focus);
    const int n_el = array.n_elements();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_el));
    CMatrix w(grid.size(), n_el);
    for (int n = 0; n < n_el; ++n) {
        const double tau = element_delay(array.position(n), focus);
        for (int m = 0; m < grid.size(); ++m)
            w(m, n) = scale * unit_phasor(kTwoPi * grid.frequency(m) * tau);
    }
    return {w, focus, Method::ttd};
}

/// K contiguous sub-arrays share one delay, the centroid of their element
/// delays rounded to the TTD resolution. Phase shifters absorb the residual
/// at fc, so the carrier row equals the conjugate focusing codeword.
inline FrequencyDependentCodeword subarray_ttd_weights(const ArrayConfig& array, const FrequencyGrid& grid,
                                                       const PolarPoint& focus, const TtdConfig& ttd)
{
    ttd.validate(array.n_elements());
    if (ttd.mode == TtdMode::ideal_full)
        return ideal_ttd_weights(array, grid, focus);
    validate_point(focus);
    const int n_el = array.n_elements();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_el));
    CMatrix w(grid.size(), n_el);
    for (const auto& [begin, end] : contiguous_blocks(n_el, ttd.n_units)) {
        double mean = 0.0;
        for (int n = begin; n < end; ++n)
            mean += element_delay(array.position(n), focus);
        mean /= (end - begin);
        const double applied = quantize_delay(mean, ttd.resolution_s);
        for (int n = begin; n < end; ++n) {
            const double residual = kTwoPi * grid.fc() * (element_delay(array.position(n), focus) - applied);
            for (int m = 0; m < grid.size(); ++m)
                w(m, n) = scale * unit_phasor(kTwoPi * grid.frequency(m) * applied + residual);
        }
    }
    return {w, focus, Method::ttd};
}

/// TTD codewords focused on the ROI sector centres at mid-range.
inline Codebook ttd_codebook(const ArrayConfig& array, const FrequencyGrid& grid, const RegionOfInterest& roi,
                             int size, const TtdConfig& ttd)
{
    Codebook cb;
    cb.method = Method::ttd;
    cb.roi = roi;
    for (double th : sector_centers(roi, size)) {
        const PolarPoint p{roi.r_mid(), th};
        cb.codewords.push_back(ttd.mode == TtdMode::ideal_full ? ideal_ttd_weights(array, grid, p)
                                                               : subarray_ttd_weights(array, grid, p, ttd));
    }
    return cb;
}

} // namespace nfisac
