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

// Sensing-aided link: the sensing sweep decides between near-field focusing
// on the estimated user position and a far-field fallback beam.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nfisac/eval/sensing.hpp"

namespace nfisac {

/// SE = (1/M) sum_m log2(1 + P |sum_n w[m][n] H[m][n]|^2 / sigma^2).
/// w stores conjugate phases, so no further conjugation is applied.
inline double spectral_efficiency(const Codeword& w, const CMatrix& h_user, double sigma2, double tx_power)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("spectral_efficiency: noise power must be positive");
    if (!(tx_power >= 0.0))
        throw std::invalid_argument("spectral_efficiency: transmit power must be >= 0");
    const SubcarrierChannel b = beamformed_response(w, SteeringMatrix{h_user});
    double se = 0.0;
    for (Eigen::Index m = 0; m < b.size(); ++m)
        se += std::log2(1.0 + tx_power * std::norm(b(m)) / sigma2);
    return se / static_cast<double>(b.size());
}

/// Users on a Cartesian grid (x = r sin theta, y = r cos theta) over the
/// ROI bounding box, kept when inside the ROI. The grid is refined until at
/// least n_target users fall inside. Order: y ascending, then x ascending.
inline std::vector<PolarPoint> user_grid(const RegionOfInterest& roi, int n_target)
{
    roi.validate();
    std::vector<PolarPoint> users;
    if (n_target <= 0)
        return users;
    const double x_lo = roi.r_max_m * std::sin(roi.theta_min_rad);
    const double x_hi = roi.r_max_m * std::sin(roi.theta_max_rad);
    const double th_abs = std::max(std::abs(roi.theta_min_rad), std::abs(roi.theta_max_rad));
    const double y_lo = (roi.theta_min_rad <= 0.0 && roi.theta_max_rad >= 0.0)
                            ? roi.r_min_m * std::cos(th_abs)
                            : std::min(roi.r_min_m * std::cos(th_abs), roi.r_min_m);
    const double y_hi = roi.r_max_m;
    for (int n = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_target)))); n <= 4096; n += 1) {
        users.clear();
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double x = n > 1 ? x_lo + (x_hi - x_lo) * ix / (n - 1) : 0.5 * (x_lo + x_hi);
                const double y = n > 1 ? y_lo + (y_hi - y_lo) * iy / (n - 1) : 0.5 * (y_lo + y_hi);
                const PolarPoint p{std::hypot(x, y), std::atan2(x, y)};
                if (roi.contains(p) && std::abs(p.angle_rad) < 0.5 * kPi)
                    users.push_back(p);
            }
        if (static_cast<int>(users.size()) >= n_target)
            return users;
    }
    return users;
}

namespace detail {

inline double nearest(const std::vector<double>& grid, double x)
{
    return *std::min_element(grid.begin(), grid.end(),
                             [x](double a, double b) { return std::abs(a - x) < std::abs(b - x); });
}

/// Angular width per distinct focus angle of the codebook.
inline double sector_width(const Codebook& cb, const RegionOfInterest& roi)
{
    std::vector<double> angles;
    for (const auto& cw : cb.codewords)
        angles.push_back(cw.focus.angle_rad);
    std::sort(angles.begin(), angles.end());
    const auto n = std::unique(angles.begin(), angles.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-12; }) -
                   angles.begin();
    return roi.theta_span() / static_cast<double>(std::max<std::ptrdiff_t>(1, n));
}

} // namespace detail

struct Refinement {
    double angle_rad = 0.0;
    double peak = 0.0;
    bool confirmed = false;
};

/// Focused re-sensing of a detection. Near-field beams focused at the
/// detected range sweep the ROI angle cells of the detecting codeword's
/// sector (plus one cell either side), then a 1/8-cell grid around the best
/// cell. Each probe is a fresh echo of the same scene scored by its MRC map
/// maximum within +-1 range bin of the detected cell. The detection counts as
/// confirmed when the best probe exceeds `threshold`; a unit-norm combiner
/// sees the same noise statistics as the sweep, so the sweep threshold
/// carries over.
inline Refinement refine_angle(const Scenario& s, const SensingTarget& target, std::uint64_t trial,
                               const Codeword& hit, double sector_width, const Detection& det, double threshold)
{
    const auto cells = roi_angle_cells(s.roi);
    const double step = cells.size() > 1 ? cells[1] - cells[0] : s.roi.theta_step_rad;
    const double lo = hit.focus.angle_rad - 0.5 * sector_width - step;
    const double hi = hit.focus.angle_rad + 0.5 * sector_width + step;
    const double r = std::max(det.range_m, 0.5 * s.roi.r_min_m);
    const auto ctx = detail::make_trial_context(s, target, trial);
    const double t_o = ctx.frame.symbol_duration(s.grid.bandwidth());

    std::uint64_t probe = 0;
    Refinement best;
    best.angle_rad = detail::nearest(cells, hit.focus.angle_rad);
    best.peak = -1.0;
    auto measure = [&](double th) {
        const Codeword cw = conjugate_focus_codeword(s.array, s.grid.fc(), {r, th});
        const SubcarrierChannel h = two_way_response(cw, cw, steering_matrix(s.array, s.grid, cw.focus));
        const DelayDopplerMap map =
            range_doppler_map(detail::codeword_quotient(s, cw, ctx, trial, stream::kRefine, probe++),
                              mrc_combiner(h), s.grid, t_o, s.detection.padding);
        double v = 0.0;
        for (int dk = -1; dk <= 1; ++dk) {
            const int k = det.range_bin + dk;
            if (k >= 0 && k < map.n_range_bins())
                v = std::max(v, map.values(k, det.doppler_bin));
        }
        if (v > best.peak) {
            best.peak = v;
            best.angle_rad = th;
        }
    };
    for (double th : cells)
        if (th >= lo && th <= hi)
            measure(th);
    const double centre = best.angle_rad;
    for (int i = -8; i <= 8; ++i)
        if (i != 0)
            measure(centre + i * step / 8.0);
    best.confirmed = best.peak > threshold;
    return best;
}

struct E2eRow {
    PolarPoint user;
    bool detected = false;
    std::string mode; ///< "nf" when sensing produced a detection, else "ff"
    double se = 0.0;
    double se_upper = 0.0;
    double se_lower = 0.0;
};

/// Per-user throughput. The sensing sweep is trial u of the scenario with the
/// user as target. On any detection the link focuses at the strongest
/// detection: range from its estimate, angle from refine_angle inside the
/// detecting codeword's sector. An unconfirmed detection falls back to far
/// field; a confirmed false alarm mis-focuses the beam. Without detections
/// the far-field beam at the nearest ROI angle cell is used, which is also
/// the lower bound. The upper bound focuses at the true position.
inline std::vector<E2eRow> e2e_throughput(const Scenario& s, const SensingSystem& sys,
                                          const std::vector<PolarPoint>& users)
{
    for (const auto& u : users) {
        validate_point(u);
        if (u.is_far_field())
            throw std::invalid_argument("e2e_throughput: users need a finite range");
    }
    const auto cells = roi_angle_cells(s.roi);
    const double width = detail::sector_width(sys.codebook, s.roi);
    std::vector<E2eRow> rows(users.size());
    parallel_for(static_cast<int>(users.size()), [&](int u) {
        const auto trial = static_cast<std::uint64_t>(u);
        Rng target_rng(derive_seed(s.seed, {trial, stream::kTarget}));
        const SensingTarget target{users[u], unit_phasor(uniform(target_rng, 0.0, kTwoPi)), 0.0};
        const TrialResult res = sensing_trial(s, sys, target, trial);

        Rng comm_rng(derive_seed(s.seed, {trial, stream::kCommChannel}));
        const CMatrix h = synthesize_user_channel(s.array, s.grid, users[u], s.channel, s.roi, comm_rng);
        const double cell_theta = detail::nearest(cells, users[u].angle_rad);
        const Codeword lower =
            conjugate_focus_codeword(s.array, s.grid.fc(), PolarPoint::far_field(cell_theta), Method::ff);
        const Codeword upper = conjugate_focus_codeword(s.array, s.grid.fc(), users[u]);

        E2eRow& row = rows[u];
        row.user = users[u];
        row.detected = res.detected;
        row.se_lower = spectral_efficiency(lower, h, s.comm_noise_power, s.tx_power);
        row.se_upper = spectral_efficiency(upper, h, s.comm_noise_power, s.tx_power);
        if (!res.strongest) {
            row.mode = "ff";
            row.se = row.se_lower;
            return;
        }
        const Codeword& hit = sys.codebook.codewords[res.strongest_codeword];
        const Refinement ref = refine_angle(s, target, trial, hit, width, *res.strongest,
                                            sys.thresholds[res.strongest_codeword]);
        if (!ref.confirmed) {
            row.mode = "ff";
            row.se = row.se_lower;
            return;
        }
        const double r = std::max(res.strongest->range_m, 0.5 * s.roi.r_min_m);
        row.mode = "nf";
        row.se = spectral_efficiency(conjugate_focus_codeword(s.array, s.grid.fc(), {r, ref.angle_rad}), h,
                                     s.comm_noise_power, s.tx_power);
    });
    return rows;
}

} // namespace nfisac
