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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nfisac/codebook/codeword.hpp"

namespace nfisac {

/// Best-codeword wideband gain sum_m |b_m|^2 on a polar cell grid.
struct CoverageMap {
    std::vector<double> thetas_rad; ///< cell centres
    std::vector<double> ranges_m;   ///< cell centres
    RMatrix values;                 ///< n_theta x n_range

    double min_value() const { return values.minCoeff(); }
    double max_value() const { return values.maxCoeff(); }
};

namespace detail {

/// ceil(span / step) cell centres; a zero span gives one cell at lo.
inline std::vector<double> cell_centres(double lo, double hi, double step)
{
    const double span = hi - lo;
    const int n = span > 0.0 ? std::max(1, static_cast<int>(std::ceil(span / step - 1e-9))) : 1;
    std::vector<double> c(n);
    const double width = span / n;
    for (int i = 0; i < n; ++i)
        c[i] = lo + (i + 0.5) * width;
    return c;
}

} // namespace detail

/// max_c sum_m |b_m(p)|^2
inline double best_gain(const Codebook& cb, const SteeringMatrix& a)
{
    double best = 0.0;
    for (const auto& cw : cb.codewords)
        best = std::max(best, beamformed_response(cw, a).squaredNorm());
    return best;
}

inline CoverageMap coverage_map(const Codebook& cb, const ArrayConfig& array, const FrequencyGrid& grid,
                                const RegionOfInterest& roi)
{
    roi.validate();
    cb.validate();
    if (cb.n_elements() != array.n_elements())
        throw std::invalid_argument("coverage_map: codebook and array disagree on N");
    CoverageMap map;
    map.thetas_rad = detail::cell_centres(roi.theta_min_rad, roi.theta_max_rad, roi.theta_step_rad);
    map.ranges_m = detail::cell_centres(roi.r_min_m, roi.r_max_m, roi.r_step_m);
    map.values.resize(static_cast<Eigen::Index>(map.thetas_rad.size()), static_cast<Eigen::Index>(map.ranges_m.size()));
    for (std::size_t i = 0; i < map.thetas_rad.size(); ++i)
        for (std::size_t j = 0; j < map.ranges_m.size(); ++j)
            map.values(i, j) = best_gain(cb, steering_matrix(array, grid, {map.ranges_m[j], map.thetas_rad[i]}));
    return map;
}

/// min over points of the best-codeword gain.
inline double min_gain(const Codebook& cb, const ArrayConfig& array, const FrequencyGrid& grid,
                       const std::vector<PolarPoint>& points)
{
    if (points.empty())
        throw std::invalid_argument("min_gain: empty point set");
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& p : points)
        lo = std::min(lo, best_gain(cb, steering_matrix(array, grid, p)));
    return lo;
}

} // namespace nfisac
