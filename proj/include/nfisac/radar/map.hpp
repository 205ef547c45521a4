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

// Delay-Doppler periodogram and noise-only threshold calibration.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "nfisac/combiner.hpp"
#include "nfisac/core/random.hpp"

namespace nfisac {

struct DelayDopplerMap {
    RMatrix values;               ///< Z[k][q], K x Q
    double range_per_bin = 0.0;   ///< metres per range bin
    double velocity_per_bin = 0.0; ///< m/s per Doppler bin

    int n_range_bins() const { return static_cast<int>(values.rows()); }
    int n_doppler_bins() const { return static_cast<int>(values.cols()); }

    /// Signed Doppler index in [-Q/2, Q/2).
    int signed_doppler(int q) const { return 2 * q >= n_doppler_bins() ? q - n_doppler_bins() : q; }

    double range_m(double k) const { return k * range_per_bin; }
    double velocity_mps(double q_signed) const { return q_signed * velocity_per_bin; }
};

/// Z[k][q] = |sum_l sum_m conj(v_m) G[m][l] exp(+j 2 pi m k / K) exp(-j 2 pi l q / Q)|^2
/// with K = padding * M and Q = padding * L (zero padded when padding > 1).
inline DelayDopplerMap range_doppler_map(const CMatrix& g, const CVector& v, const FrequencyGrid& grid,
                                         double symbol_duration_s, int padding = 1)
{
    if (v.size() != g.rows() || grid.size() != g.rows())
        throw std::invalid_argument("range_doppler_map: combiner length mismatch");
    if (padding < 1)
        throw std::invalid_argument("range_doppler_map: padding factor must be >= 1");
    if (!(symbol_duration_s > 0.0))
        throw std::invalid_argument("range_doppler_map: symbol duration must be positive");
    const auto M = static_cast<int>(g.rows());
    const auto L = static_cast<int>(g.cols());
    const int K = padding * M;
    const int Q = padding * L;

    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    CMatrix stage(K, L);
    std::vector<cdouble> in(K), out(K);
    for (int l = 0; l < L; ++l) {
        std::fill(in.begin(), in.end(), cdouble(0.0));
        for (int m = 0; m < M; ++m)
            in[m] = std::conj(v(m)) * g(m, l);
        if (K > 1)
            fft.inv(out, in);
        else
            out = in; // kissfft does not handle length 1
        for (int k = 0; k < K; ++k)
            stage(k, l) = out[k];
    }

    DelayDopplerMap map;
    map.values.resize(K, Q);
    std::vector<cdouble> din(Q), dout(Q);
    for (int k = 0; k < K; ++k) {
        std::fill(din.begin(), din.end(), cdouble(0.0));
        for (int l = 0; l < L; ++l)
            din[l] = stage(k, l);
        if (Q > 1)
            fft.fwd(dout, din);
        else
            dout = din;
        for (int q = 0; q < Q; ++q)
            map.values(k, q) = std::norm(dout[q]);
    }
    map.range_per_bin = kSpeedOfLight / (2.0 * grid.bandwidth() * padding);
    map.velocity_per_bin = kSpeedOfLight / (2.0 * grid.fc() * Q * symbol_duration_s);
    return map;
}

inline DelayDopplerMap range_doppler_map(const CMatrix& g, const Combiner& v, const FrequencyGrid& grid,
                                         double symbol_duration_s, int padding = 1)
{
    return range_doppler_map(g, v.values, grid, symbol_duration_s, padding);
}

/// White circular Gaussian noise of variance sigma^2 on an M x L quotient.
struct NoiseModel {
    FrequencyGrid grid;
    int n_symbols = 1;
    double noise_power = 1.0;
    double symbol_duration_s = 1.0;
    int padding = 1;
};

/// Empirical (1 - pfa) quantile of the per-map maximum over noise-only maps.
/// The quantile is the order statistic with index ceil((1 - pfa) n) - 1.
inline double calibrate_threshold(const NoiseModel& noise, const CVector& v, double pfa_target, int n_trials, Rng& rng)
{
    if (!(pfa_target > 0.0 && pfa_target < 1.0))
        throw std::invalid_argument("calibrate_threshold: pfa_target must lie in (0, 1)");
    if (n_trials < 1 || n_trials * pfa_target < 1.0)
        throw std::invalid_argument("calibrate_threshold: n_trials * pfa_target must be >= 1");
    if (!(noise.noise_power >= 0.0))
        throw std::invalid_argument("calibrate_threshold: noise power must be >= 0");
    const int M = noise.grid.size();
    std::vector<double> maxima(n_trials);
    CMatrix g(M, noise.n_symbols);
    for (int t = 0; t < n_trials; ++t) {
        for (int l = 0; l < noise.n_symbols; ++l)
            for (int m = 0; m < M; ++m)
                g(m, l) = complex_normal(rng, noise.noise_power);
        maxima[t] = range_doppler_map(g, v, noise.grid, noise.symbol_duration_s, noise.padding).values.maxCoeff();
    }
    std::sort(maxima.begin(), maxima.end());
    auto idx = static_cast<long long>(std::ceil((1.0 - pfa_target) * n_trials - 1e-9)) - 1;
    idx = std::clamp<long long>(idx, 0, n_trials - 1);
    return maxima[static_cast<std::size_t>(idx)];
}

inline double calibrate_threshold(const NoiseModel& noise, const Combiner& v, double pfa_target, int n_trials,
                                  Rng& rng)
{
    return calibrate_threshold(noise, v.values, pfa_target, n_trials, rng);
}

} // namespace nfisac
