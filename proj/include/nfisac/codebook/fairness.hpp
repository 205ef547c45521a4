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

// Max-min fair analog codebook. The ROI is split into angular sectors and
// each sector gets one unit-modulus codeword maximising a log-sum-exp
// smoothed minimum of the wideband gain over the sector's grid points.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nfisac/codebook/classic.hpp"
#include "nfisac/codebook/codeword.hpp"
#include "nfisac/core/parallel.hpp"

namespace nfisac {

struct AngleSector {
    double theta_lo_rad = 0.0;
    double theta_hi_rad = 0.0;
    std::vector<PolarPoint> points;

    double center() const { return 0.5 * (theta_lo_rad + theta_hi_rad); }
};

/// Angle cell centres of the ROI grid (one cell when the span is zero).
inline std::vector<double> roi_angle_cells(const RegionOfInterest& roi)
{
    const int n = std::max(1, static_cast<int>(std::ceil(roi.theta_span() / roi.theta_step_rad - 1e-9)));
    const double width = roi.theta_span() / n;
    std::vector<double> th(n);
    for (int i = 0; i < n; ++i)
        th[i] = roi.theta_min_rad + (i + 0.5) * width;
    return th;
}

/// Splits the ROI angle range into n equal sectors. Each sector carries the
/// ROI grid points (angle cell centres x inclusive range samples) that fall
/// inside it, so every grid point belongs to exactly one sector.
inline std::vector<AngleSector> partition_roi(const RegionOfInterest& roi, int n_codewords)
{
    roi.validate();
    if (n_codewords < 1)
        throw std::invalid_argument("partition_roi: need at least one codeword");
    const double width = roi.theta_span() / n_codewords;
    std::vector<AngleSector> sectors(n_codewords);
    for (int s = 0; s < n_codewords; ++s) {
        sectors[s].theta_lo_rad = roi.theta_min_rad + s * width;
        sectors[s].theta_hi_rad = roi.theta_min_rad + (s + 1) * width;
    }
    const auto ranges = roi.range_samples();
    for (double th : roi_angle_cells(roi)) {
        int s = width > 0.0 ? static_cast<int>(std::floor((th - roi.theta_min_rad) / width)) : 0;
        s = std::clamp(s, 0, n_codewords - 1);
        for (double r : ranges)
            sectors[s].points.push_back({r, th});
    }
    return sectors;
}

/// Steering matrices of a point set stacked into one (P*M) x N matrix;
/// rows [i*M, (i+1)*M) belong to point i.
class SteeringCache {
public:
    SteeringCache(const ArrayConfig& array, const FrequencyGrid& grid, const std::vector<PolarPoint>& points)
        : n_points_(static_cast<int>(points.size())), n_sub_(grid.size()),
          stacked_(static_cast<Eigen::Index>(points.size()) * grid.size(), array.n_elements())
    {
        if (points.empty())
            throw std::invalid_argument("SteeringCache: empty point set");
        for (int i = 0; i < n_points_; ++i)
            stacked_.middleRows(static_cast<Eigen::Index>(i) * n_sub_, n_sub_) =
                steering_matrix(array, grid, points[i]).values;
    }

    int n_points() const { return n_points_; }
    int n_subcarriers() const { return n_sub_; }
    int n_elements() const { return static_cast<int>(stacked_.cols()); }
    const CMatrix& stacked() const { return stacked_; }

private:
    int n_points_;
    int n_sub_;
    CMatrix stacked_;
};

/// g_i = sum_m |b_m(p_i)|^2 for every cached point.
inline RVector point_gains(const CVector& w, const SteeringCache& cache)
{
    const CVector b = cache.stacked() * w;
    RVector g(cache.n_points());
    for (int i = 0; i < cache.n_points(); ++i)
        g(i) = b.segment(static_cast<Eigen::Index>(i) * cache.n_subcarriers(), cache.n_subcarriers()).squaredNorm();
    return g;
}

struct SmoothMinValue {
    double value = 0.0;
    /// d/dRe(w) + j d/dIm(w)
    CVector gradient;
    RVector gains;
};

/// F = -(1/beta) ln sum_i exp(-beta g_i), evaluated in the shifted form
/// min(g) - (1/beta) ln sum_i exp(-beta (g_i - min g)).
inline SmoothMinValue smooth_min_objective(const CVector& w, const SteeringCache& cache, double beta)
{
    if (!(beta > 0.0))
        throw std::invalid_argument("smooth_min_objective: beta must be positive");
    if (w.size() != cache.n_elements())
        throw std::invalid_argument("smooth_min_objective: codeword length mismatch");
    const int M = cache.n_subcarriers();
    CVector b = cache.stacked() * w;
    RVector g(cache.n_points());
    for (int i = 0; i < cache.n_points(); ++i)
        g(i) = b.segment(static_cast<Eigen::Index>(i) * M, M).squaredNorm();

    const double g_min = g.minCoeff();
    RVector e = (-beta * (g.array() - g_min)).exp().matrix();
    const double sum = e.sum();

    SmoothMinValue out;
    out.value = g_min - std::log(sum) / beta;
    // dF/dg_i is the softmin weight e_i / sum; dg_i = 2 A_i^H b_i.
    for (int i = 0; i < cache.n_points(); ++i)
        b.segment(static_cast<Eigen::Index>(i) * M, M) *= 2.0 * e(i) / sum;
    out.gradient = cache.stacked().adjoint() * b;
    out.gains = std::move(g);
    return out;
}

/// w_n <- w_n / (sqrt(N) |w_n|); zero entries map to phase 0.
inline CVector project_unit_modulus(const CVector& w)
{
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.size()));
    CVector out(w.size());
    for (Eigen::Index n = 0; n < w.size(); ++n) {
        const double mag = std::abs(w(n));
        out(n) = mag > 0.0 ? w(n) * (scale / mag) : cdouble(scale, 0.0);
    }
    return out;
}

struct PgdParams {
    double step_size = 0.5;   ///< initial step as a fraction of ||w|| / ||grad||
    double beta0 = 0.0;       ///< <= 0 selects 10 / median(g) at the initial point
    double beta_growth = 2.0;
    int beta_epoch = 50;
    int max_iters = 400;
    double rel_tol = 1e-6;    ///< relative objective gain per epoch below which we stop
    double backtracking = 0.5;

    void validate() const
    {
        if (!(step_size > 0.0) || !(beta_growth >= 1.0) || beta_epoch < 1 || max_iters < 0 || !(rel_tol > 0.0) ||
            !(backtracking > 0.0 && backtracking < 1.0))
            throw std::invalid_argument("PgdParams: invalid optimiser settings");
    }
};

struct PgdResult {
    Codeword codeword;
    std::vector<double> trace; ///< F_beta after every accepted iteration (entry 0 = init)
    double final_beta = 0.0;
    int iterations = 0;
};

inline double median(RVector v)
{
    std::sort(v.data(), v.data() + v.size());
    const auto n = v.size();
    return n % 2 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

/// Projected gradient ascent on the smoothed minimum with backtracking and
/// beta continuation. Steps are accepted only when F_beta does not decrease,
/// and F_beta is nondecreasing in beta, so the trace is monotone.
inline PgdResult pgd_codeword(const Codeword& init, const SteeringCache& cache, const PgdParams& params)
{
    params.validate();
    CVector w = init.flat();
    PgdResult out;
    out.codeword = init;

    double beta = params.beta0;
    if (!(beta > 0.0)) {
        const RVector g0 = point_gains(w, cache);
        double ref = median(g0);
        if (!(ref > 0.0))
            ref = std::max(g0.mean(), 1e-12);
        beta = 10.0 / ref;
    }
    SmoothMinValue cur = smooth_min_objective(w, cache, beta);
    out.trace.push_back(cur.value);
    out.final_beta = beta;
    if (params.max_iters == 0)
        return out;

    const double grad_norm = cur.gradient.norm();
    double eta = grad_norm > 0.0 ? params.step_size * w.norm() / grad_norm : params.step_size;
    const double eta_floor = eta * 1e-12;
    double epoch_start = cur.value;

    int it = 0;
    for (; it < params.max_iters; ++it) {
        if (it > 0 && it % params.beta_epoch == 0) {
            const double gain = cur.value - epoch_start;
            if (gain <= params.rel_tol * std::max(std::abs(epoch_start), 1e-300))
                break;
            if (params.beta_growth > 1.0) {
                beta *= params.beta_growth;
                cur = smooth_min_objective(w, cache, beta);
            }
            epoch_start = cur.value;
        }

        bool accepted = false;
        while (eta > eta_floor) {
            CVector cand = project_unit_modulus(w + eta * cur.gradient);
            SmoothMinValue next = smooth_min_objective(cand, cache, beta);
            if (next.value >= cur.value) {
                w = std::move(cand);
                cur = std::move(next);
                accepted = true;
                break;
            }
            eta *= params.backtracking;
        }
        if (!accepted)
            break;
        out.trace.push_back(cur.value);
        eta /= params.backtracking;
    }

    out.codeword.weights = w.transpose();
    out.final_beta = beta;
    out.iterations = it;
    return out;
}

/// One PGD-optimised codeword per ROI sector, initialised at the far-field
/// beam of the sector centre. The focus metadata is the sector centre at
/// mid-range.
inline Codebook fairness_codebook(const ArrayConfig& array, const FrequencyGrid& grid, const RegionOfInterest& roi,
                                  int size, const PgdParams& params)
{
    params.validate();
    const auto sectors = partition_roi(roi, size);
    Codebook cb;
    cb.method = Method::fairness;
    cb.roi = roi;
    cb.codewords.resize(sectors.size());
    parallel_for(static_cast<int>(sectors.size()), [&](int s) {
        const SteeringCache cache(array, grid, sectors[s].points);
        const Codeword init = conjugate_focus_codeword(array, grid.fc(), PolarPoint::far_field(sectors[s].center()),
                                                       Method::fairness);
        Codeword cw = pgd_codeword(init, cache, params).codeword;
        cw.focus = {roi.r_mid(), sectors[s].center()};
        cw.method = Method::fairness;
        cb.codewords[s] = std::move(cw);
    });
    return cb;
}

} // namespace nfisac
