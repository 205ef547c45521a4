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
#include <stdexcept>
#include <vector>

#include "nfisac/core/geometry.hpp"

namespace nfisac {

/// M x N matrix of unit-magnitude steering phases, row m = subcarrier m.
struct SteeringMatrix {
    CMatrix values;

    int n_subcarriers() const { return static_cast<int>(values.rows()); }
    int n_elements() const { return static_cast<int>(values.cols()); }
};

/// Path-length difference r_n - r between element n and the array centre,
/// in a form that stays accurate when r is much larger than x_n.
inline double path_difference(double x_n, const PolarPoint& p)
{
    const double s = std::sin(p.angle_rad);
    const double r = p.range_m;
    const double r_n = std::sqrt(r * r + x_n * x_n - 2.0 * r * x_n * s);
    return (x_n * x_n - 2.0 * r * x_n * s) / (r_n + r);
}

/// Signed one-way propagation delay of element n relative to the array centre.
/// Far-field points use the planar model -x_n sin(theta) / c.
inline double element_delay(double x_n, const PolarPoint& p)
{
    if (p.is_far_field())
        return -x_n * std::sin(p.angle_rad) / kSpeedOfLight;
    return path_difference(x_n, p) / kSpeedOfLight;
}

/// Spherical-wavefront steering: a[m][n] = exp(-j 2 pi f_m (r_n - r) / c).
inline SteeringMatrix nf_steering_matrix(const ArrayConfig& array, const FrequencyGrid& grid, const PolarPoint& p)
{
    if (p.is_far_field() || !(p.range_m > 0.0))
        throw std::invalid_argument("nf_steering_matrix: focal range must be finite and positive");
    const int n_el = array.n_elements();
    const int n_sc = grid.size();
    std::vector<double> dist(n_el);
    for (int n = 0; n < n_el; ++n)
        dist[n] = path_difference(array.position(n), p);

    SteeringMatrix a{CMatrix(n_sc, n_el)};
    for (int m = 0; m < n_sc; ++m) {
        const double k = kTwoPi * grid.frequency(m) / kSpeedOfLight;
        for (int n = 0; n < n_el; ++n)
            a.values(m, n) = unit_phasor(-k * dist[n]);
    }
    return a;
}

/// Planar-wavefront steering: a[m][n] = exp(+j 2 pi f_m x_n sin(theta) / c).
inline SteeringMatrix ff_steering_matrix(const ArrayConfig& array, const FrequencyGrid& grid, double theta_rad)
{
    const int n_el = array.n_elements();
    const int n_sc = grid.size();
    const double s = std::sin(theta_rad);
    SteeringMatrix a{CMatrix(n_sc, n_el)};
    for (int m = 0; m < n_sc; ++m) {
        const double k = kTwoPi * grid.frequency(m) / kSpeedOfLight;
        for (int n = 0; n < n_el; ++n)
            a.values(m, n) = unit_phasor(k * array.position(n) * s);
    }
    return a;
}

/// Dispatches on the far-field sentinel.
inline SteeringMatrix steering_matrix(const ArrayConfig& array, const FrequencyGrid& grid, const PolarPoint& p)
{
    return p.is_far_field() ? ff_steering_matrix(array, grid, p.angle_rad) : nf_steering_matrix(array, grid, p);
}

/// b_m = sum_n w[m][n] a[m][n]. The weights carry the conjugate focusing
/// phase, so a matched codeword of norm one yields b = sqrt(N).
/// A single weight row is broadcast over all subcarriers.
inline SubcarrierChannel beamformed_response(const CMatrix& weights, const SteeringMatrix& a)
{
    if (weights.cols() != a.values.cols())
        throw std::invalid_argument("beamformed_response: element count mismatch");
    if (weights.rows() == 1)
        return a.values * weights.row(0).transpose();
    if (weights.rows() != a.values.rows())
        throw std::invalid_argument("beamformed_response: subcarrier count mismatch");
    return a.values.cwiseProduct(weights).rowwise().sum();
}

/// G_m = |b_m|^2
inline RVector beam_gain(const SubcarrierChannel& b) { return b.cwiseAbs2(); }

} // namespace nfisac
