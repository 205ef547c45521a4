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
#include <limits>
#include <stdexcept>

#include "nfisac/core/geometry.hpp"
#include "nfisac/core/random.hpp"
#include "nfisac/core/steering.hpp"

namespace nfisac {

struct ChannelParams {
    double rician_k_db = 30.0; ///< +inf gives a pure line-of-sight channel
    int n_scatterers = 4;
    double phase_noise_deg = 2.0; ///< per-symbol standard deviation
    double noise_power = 1.0;
    std::uint64_t seed = 1;

    void validate() const
    {
        if (!(rician_k_db >= 0.0))
            throw std::invalid_argument("ChannelParams: K-factor must be >= 0 dB");
        if (n_scatterers < 0)
            throw std::invalid_argument("ChannelParams: scatterer count must be >= 0");
        if (!(phase_noise_deg >= 0.0))
            throw std::invalid_argument("ChannelParams: phase noise must be >= 0");
        if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
            throw std::invalid_argument("ChannelParams: noise power must be >= 0");
    }

    /// Linear K; infinite when there is nothing to scatter.
    double k_linear() const
    {
        if (n_scatterers == 0 || std::isinf(rician_k_db))
            return std::numeric_limits<double>::infinity();
        return std::pow(10.0, rician_k_db / 10.0);
    }

    /// Amplitude scale sqrt(K/(K+1)) of the line-of-sight term.
    double los_amplitude() const
    {
        const double k = k_linear();
        return std::isinf(k) ? 1.0 : std::sqrt(k / (k + 1.0));
    }

    /// Amplitude scale sqrt(1/(K+1)) of the diffuse term.
    double nlos_amplitude() const
    {
        const double k = k_linear();
        return std::isinf(k) ? 0.0 : std::sqrt(1.0 / (k + 1.0));
    }
};

/// Uniform point inside the ROI.
inline PolarPoint sample_point(const RegionOfInterest& roi, Rng& rng)
{
    const double r = uniform(rng, roi.r_min_m, roi.r_max_m);
    const double th = uniform(rng, roi.theta_min_rad, roi.theta_max_rad);
    return {r, th};
}

/// Per-antenna M x N Rician channel towards p. Scatterers are drawn uniformly
/// inside scatter_region with standard complex Gaussian gains.
inline CMatrix synthesize_user_channel(const ArrayConfig& array, const FrequencyGrid& grid, const PolarPoint& p,
                                       const ChannelParams& params, const RegionOfInterest& scatter_region, Rng& rng)
{
    params.validate();
    CMatrix h = params.los_amplitude() * steering_matrix(array, grid, p).values;
    const double nlos = params.nlos_amplitude();
    if (nlos == 0.0)
        return h;
    const double scale = nlos / std::sqrt(static_cast<double>(params.n_scatterers));
    for (int s = 0; s < params.n_scatterers; ++s) {
        const PolarPoint q = sample_point(scatter_region, rng);
        const cdouble g = complex_normal(rng);
        h += (scale * g) * steering_matrix(array, grid, q).values;
    }
    return h;
}

} // namespace nfisac
