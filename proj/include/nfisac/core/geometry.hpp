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
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfisac/core/types.hpp"

namespace nfisac {

/// Uniform linear array along x, phase reference at the array center.
class ArrayConfig {
public:
    ArrayConfig(int n_elements, double spacing_m) : n_elements_(n_elements), spacing_m_(spacing_m)
    {
        if (n_elements < 2)
            throw std::invalid_argument("ArrayConfig: at least two elements are required");
        if (!(spacing_m > 0.0) || !std::isfinite(spacing_m))
            throw std::invalid_argument("ArrayConfig: element spacing must be positive");
    }

    /// Half-wavelength pitch at the carrier.
    static ArrayConfig half_wavelength(int n_elements, double fc_hz)
    {
        if (!(fc_hz > 0.0))
            throw std::invalid_argument("ArrayConfig: carrier frequency must be positive");
        return {n_elements, 0.5 * wavelength(fc_hz)};
    }

    int n_elements() const { return n_elements_; }
    double spacing_m() const { return spacing_m_; }
    double aperture_m() const { return (n_elements_ - 1) * spacing_m_; }

    /// x_n = (n - (N-1)/2) d
    double position(int n) const { return (n - 0.5 * (n_elements_ - 1)) * spacing_m_; }

    bool operator==(const ArrayConfig&) const = default;

private:
    int n_elements_;
    double spacing_m_;
};

/// OFDM subcarrier grid centred on the carrier with a half-bin offset.
class FrequencyGrid {
public:
    FrequencyGrid(double fc_hz, double bandwidth_hz, int n_subcarriers)
        : fc_(fc_hz), bandwidth_(bandwidth_hz), n_(n_subcarriers)
    {
        if (!(bandwidth_hz > 0.0) || !(fc_hz > 0.5 * bandwidth_hz))
            throw std::invalid_argument("FrequencyGrid: require fc > B/2 > 0");
        if (n_subcarriers < 1)
            throw std::invalid_argument("FrequencyGrid: at least one subcarrier is required");
    }

    double fc() const { return fc_; }
    double bandwidth() const { return bandwidth_; }
    int size() const { return n_; }
    double spacing() const { return bandwidth_ / n_; }

    /// f_m = fc - B/2 + (m + 1/2) B/M
    double frequency(int m) const { return fc_ - 0.5 * bandwidth_ + (m + 0.5) * spacing(); }

    std::vector<double> frequencies() const
    {
        std::vector<double> f(n_);
        for (int m = 0; m < n_; ++m)
            f[m] = frequency(m);
        return f;
    }

    /// Same band sampled with a different number of subcarriers.
    FrequencyGrid resampled(int n_subcarriers) const { return {fc_, bandwidth_, n_subcarriers}; }

    bool operator==(const FrequencyGrid&) const = default;

private:
    double fc_;
    double bandwidth_;
    int n_;
};

/// (range, angle) in the array plane. The angle is measured from broadside.
/// An infinite range marks a far-field (angle-only) point.
struct PolarPoint {
    double range_m = std::numeric_limits<double>::infinity();
    double angle_rad = 0.0;

    static PolarPoint far_field(double angle_rad) { return {std::numeric_limits<double>::infinity(), angle_rad}; }

    bool is_far_field() const { return std::isinf(range_m); }

    bool operator==(const PolarPoint&) const = default;
};

inline void validate_point(const PolarPoint& p)
{
    if (!(std::abs(p.angle_rad) < 0.5 * kPi))
        throw std::invalid_argument("PolarPoint: angle must lie in (-90 deg, 90 deg)");
    if (!p.is_far_field() && !(p.range_m > 0.0 && std::isfinite(p.range_m)))
        throw std::invalid_argument("PolarPoint: range must be positive");
}

/// Angular sector x range interval with the sampling resolution used for
/// optimisation grids and coverage maps.
struct RegionOfInterest {
    double theta_min_rad = deg2rad(-60.0);
    double theta_max_rad = deg2rad(60.0);
    double r_min_m = 7.0;
    double r_max_m = 15.0;
    double theta_step_rad = deg2rad(1.0);
    double r_step_m = 0.5;

    void validate() const
    {
        if (!(theta_min_rad <= theta_max_rad) || theta_min_rad < -0.5 * kPi || theta_max_rad > 0.5 * kPi)
            throw std::invalid_argument("RegionOfInterest: invalid angle interval");
        if (!(r_min_m > 0.0) || !(r_min_m <= r_max_m))
            throw std::invalid_argument("RegionOfInterest: invalid range interval");
        if (!(theta_step_rad > 0.0) || !(r_step_m > 0.0))
            throw std::invalid_argument("RegionOfInterest: grid resolution must be positive");
    }

    double theta_span() const { return theta_max_rad - theta_min_rad; }
    double r_span() const { return r_max_m - r_min_m; }
    double r_mid() const { return 0.5 * (r_min_m + r_max_m); }
    double theta_mid() const { return 0.5 * (theta_min_rad + theta_max_rad); }

    bool contains(const PolarPoint& p) const
    {
        return p.angle_rad >= theta_min_rad && p.angle_rad <= theta_max_rad && p.range_m >= r_min_m &&
               p.range_m <= r_max_m;
    }

    /// Range samples r_min, r_min + dr, ... up to r_max inclusive.
    std::vector<double> range_samples() const
    {
        std::vector<double> r;
        const int n = static_cast<int>(std::floor(r_span() / r_step_m + 1e-9)) + 1;
        for (int i = 0; i < n; ++i)
            r.push_back(r_min_m + i * r_step_m);
        return r;
    }
};

/// Single point ROI, useful for degenerate codebook designs.
inline RegionOfInterest point_roi(const PolarPoint& p)
{
    RegionOfInterest roi;
    roi.theta_min_rad = roi.theta_max_rad = p.angle_rad;
    roi.r_min_m = roi.r_max_m = p.range_m;
    return roi;
}

/// Element coordinates x_n in metres.
inline std::vector<double> element_positions(const ArrayConfig& array)
{
    std::vector<double> x(array.n_elements());
    for (int n = 0; n < array.n_elements(); ++n)
        x[n] = array.position(n);
    return x;
}

/// 2 D^2 / lambda_c
inline double fraunhofer_distance(const ArrayConfig& array, double fc_hz)
{
    if (!(fc_hz > 0.0))
        throw std::invalid_argument("fraunhofer_distance: carrier frequency must be positive");
    const double d = array.aperture_m();
    return 2.0 * d * d / wavelength(fc_hz);
}

namespace presets {

inline constexpr double kCarrierHz = 60e9;
inline constexpr double kBandwidthHz = 5e9;

/// 1 m aperture at half-wavelength pitch.
inline ArrayConfig aperture_1m(double fc_hz = kCarrierHz)
{
    const double d = 0.5 * wavelength(fc_hz);
    return {static_cast<int>(std::lround(1.0 / d)) + 1, d};
}

/// 400-element half-wavelength ULA.
inline ArrayConfig ula_400(double fc_hz = kCarrierHz) { return ArrayConfig::half_wavelength(400, fc_hz); }

} // namespace presets

} // namespace nfisac
