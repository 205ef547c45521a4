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

// Frequency-flat reference codebooks: far-field angle beams, the polar
// (angle x inverse-range) near-field grid, and sub-aperture beam broadening.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nfisac/codebook/codeword.hpp"

namespace nfisac {

/// Centres of n equal angular sectors across the ROI.
inline std::vector<double> sector_centers(const RegionOfInterest& roi, int n)
{
    if (n < 1)
        throw std::invalid_argument("sector_centers: need at least one sector");
    std::vector<double> c(n);
    const double width = roi.theta_span() / n;
    for (int i = 0; i < n; ++i)
        c[i] = roi.theta_min_rad + (i + 0.5) * width;
    return c;
}

/// Contiguous [begin, end) element blocks. Every block has ceil(N/q)
/// elements except the last, which takes the remainder. When that would
/// leave a block empty the split falls back to sizes differing by one.
inline std::vector<std::pair<int, int>> contiguous_blocks(int n_elements, int q)
{
    if (q < 1 || q > n_elements)
        throw std::invalid_argument("contiguous_blocks: need 1 <= q <= N");
    std::vector<std::pair<int, int>> blocks;
    const int len = (n_elements + q - 1) / q;
    if (len * (q - 1) < n_elements) {
        for (int k = 0; k < q; ++k)
            blocks.emplace_back(k * len, std::min(n_elements, (k + 1) * len));
        return blocks;
    }
    int begin = 0;
    for (int k = 0; k < q; ++k) {
        const int sz = n_elements / q + (k < n_elements % q ? 1 : 0);
        blocks.emplace_back(begin, begin + sz);
        begin += sz;
    }
    return blocks;
}

inline Codebook ff_codebook(const ArrayConfig& array, double fc_hz, const std::vector<double>& angles_rad)
{
    if (angles_rad.empty())
        throw std::invalid_argument("ff_codebook: empty angle list");
    Codebook cb;
    cb.method = Method::ff;
    for (double th : angles_rad) {
        const PolarPoint p = PolarPoint::far_field(th);
        validate_point(p);
        cb.codewords.push_back(make_flat_codeword(conjugate_focus_weights(array, fc_hz, p), p, Method::ff));
    }
    cb.roi.theta_min_rad = *std::min_element(angles_rad.begin(), angles_rad.end());
    cb.roi.theta_max_rad = *std::max_element(angles_rad.begin(), angles_rad.end());
    return cb;
}

/// Far-field codebook with one beam per ROI sector centre.
inline Codebook ff_codebook(const ArrayConfig& array, double fc_hz, const RegionOfInterest& roi, int size)
{
    Codebook cb = ff_codebook(array, fc_hz, sector_centers(roi, size));
    cb.roi = roi;
    return cb;
}

/// Focal distances uniform in inverse range: r_s = r_min n_rings / s for
/// s = n_rings..1, followed by the far-field sentinel (+inf).
inline std::vector<double> polar_focal_distances(int n_rings, double r_min_m)
{
    if (n_rings < 1)
        throw std::invalid_argument("polar_focal_distances: need at least one ring");
    if (!(r_min_m > 0.0))
        throw std::invalid_argument("polar_focal_distances: minimum range must be positive");
    std::vector<double> r;
    for (int s = n_rings; s >= 1; --s)
        r.push_back(r_min_m * n_rings / s);
    r.push_back(std::numeric_limits<double>::infinity());
    return r;
}

/// Angle grid x focal distances, angle-major. Angles are the centres of
/// angle_step wide bins spanning the ROI; distances start at the ROI's
/// minimum range. The far-field ring uses planar codewords.
inline Codebook nf_polar_codebook(const ArrayConfig& array, double fc_hz, const RegionOfInterest& roi,
                                  double angle_step_rad, int n_rings)
{
    roi.validate();
    if (!(angle_step_rad > 0.0))
        throw std::invalid_argument("nf_polar_codebook: angle step must be positive");
    const int n_angles = std::max(1, static_cast<int>(std::floor(roi.theta_span() / angle_step_rad + 1e-9)));
    const double start = roi.theta_mid() - 0.5 * n_angles * angle_step_rad;
    const auto dist = polar_focal_distances(n_rings, roi.r_min_m);

    Codebook cb;
    cb.method = Method::nf_polar;
    cb.roi = roi;
    for (int i = 0; i < n_angles; ++i) {
        const double th = start + (i + 0.5) * angle_step_rad;
        for (double r : dist) {
            const PolarPoint p{r, th};
            cb.codewords.push_back(conjugate_focus_codeword(array, fc_hz, p, Method::nf_polar));
        }
    }
    return cb;
}

/// Polar codebook with `size / n_distances` angles and n_distances focal
/// distances (n_distances - 1 rings plus the far-field ring).
inline Codebook nf_polar_codebook(const ArrayConfig& array, double fc_hz, const RegionOfInterest& roi, int size,
                                  int n_distances)
{
    if (n_distances < 2)
        throw std::invalid_argument("nf_polar_codebook: need at least one ring plus the far-field ring");
    const int n_angles = std::max(1, size / n_distances);
    return nf_polar_codebook(array, fc_hz, roi, roi.theta_span() / n_angles, n_distances - 1);
}

/// Sub-aperture beam broadening. The array is split into q contiguous
/// sub-apertures and sub-aperture k applies the conjugate focusing phase
/// towards the codeword's focus evaluated at the centre of the k-th slice of
/// the band, using full-array element positions. Each sub-aperture is thus
/// matched to its own slice and the electrical aperture seen by any single
/// subcarrier shrinks to roughly D/q. q = 1 reproduces the conjugate
/// focusing codeword.
inline Codebook beam_broadening_codebook(const ArrayConfig& array, const FrequencyGrid& grid, int q,
                                         const std::vector<PolarPoint>& foci)
{
    if (q < 1 || q > array.n_elements())
        throw std::invalid_argument("beam_broadening_codebook: need 1 <= q <= N");
    if (foci.empty())
        throw std::invalid_argument("beam_broadening_codebook: empty focus list");
    const auto blocks = contiguous_blocks(array.n_elements(), q);
    const double scale = 1.0 / std::sqrt(static_cast<double>(array.n_elements()));

    Codebook cb;
    cb.method = Method::broadening;
    for (const auto& p : foci) {
        validate_point(p);
        CVector w(array.n_elements());
        for (int k = 0; k < q; ++k) {
            const double f_k = grid.fc() - 0.5 * grid.bandwidth() + (k + 0.5) * grid.bandwidth() / q;
            for (int n = blocks[k].first; n < blocks[k].second; ++n)
                w(n) = scale * unit_phasor(kTwoPi * f_k * element_delay(array.position(n), p));
        }
        cb.codewords.push_back(make_flat_codeword(w, p, Method::broadening));
    }
    return cb;
}

/// Broadening beams centred on the ROI sectors at mid-range.
inline Codebook beam_broadening_codebook(const ArrayConfig& array, const FrequencyGrid& grid,
                                         const RegionOfInterest& roi, int size, int q)
{
    std::vector<PolarPoint> foci;
    for (double th : sector_centers(roi, size))
        foci.push_back({roi.r_mid(), th});
    Codebook cb = beam_broadening_codebook(array, grid, q, foci);
    cb.roi = roi;
    return cb;
}

} // namespace nfisac
