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

// Monostatic OFDM echo model. A frame of unit-modulus symbols S[m][l] is
// reflected by point targets; the received matrix is
//   Y[m][l] = sum_t g_t[m] exp(-j 2 pi f_m 2 r_t / c) exp(+j 2 pi f_D,t l T_o)
//             * exp(j phi_l) S[m][l] + N[m][l]
// where g_t[m] = sqrt(P) alpha_t b_tx,m(p_t) b_rx,m(p_t).

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nfisac/codebook/codeword.hpp"
#include "nfisac/core/channel.hpp"
#include "nfisac/core/random.hpp"
#include "nfisac/core/steering.hpp"

namespace nfisac {

struct Frame {
    CMatrix symbols; ///< M x L
    double cp_fraction = 0.125;

    int n_subcarriers() const { return static_cast<int>(symbols.rows()); }
    int n_symbols() const { return static_cast<int>(symbols.cols()); }

    /// T_o = (1 + cp) M / B
    double symbol_duration(double bandwidth_hz) const
    {
        return (1.0 + cp_fraction) * n_subcarriers() / bandwidth_hz;
    }
};

/// i.i.d. QPSK symbols exp(j (pi/4 + k pi/2)).
inline Frame generate_frame(int n_subcarriers, int n_symbols, double cp_fraction, Rng& rng)
{
    if (n_subcarriers < 1 || n_symbols < 1)
        throw std::invalid_argument("generate_frame: need M, L >= 1");
    if (!(cp_fraction >= 0.0))
        throw std::invalid_argument("generate_frame: cyclic-prefix fraction must be >= 0");
    std::uniform_int_distribution<int> quadrant(0, 3);
    Frame f{CMatrix(n_subcarriers, n_symbols), cp_fraction};
    for (int l = 0; l < n_symbols; ++l)
        for (int m = 0; m < n_subcarriers; ++m)
            f.symbols(m, l) = unit_phasor(0.25 * kPi + 0.5 * kPi * quadrant(rng));
    return f;
}

struct SensingTarget {
    PolarPoint location;
    cdouble amplitude{1.0, 0.0};
    double velocity_mps = 0.0;
};

inline double doppler_shift(double velocity_mps, double fc_hz) { return 2.0 * velocity_mps * fc_hz / kSpeedOfLight; }

/// One reflection with its per-subcarrier complex gain already resolved.
struct EchoPath {
    SubcarrierChannel gain;
    double range_m = 0.0;
    double velocity_mps = 0.0;
};

/// g[m] = b_tx,m b_rx,m for a point seen through the given beams.
inline SubcarrierChannel two_way_response(const Codeword& tx, const Codeword& rx, const SteeringMatrix& a)
{
    return beamformed_response(tx, a).cwiseProduct(beamformed_response(rx, a));
}

inline EchoPath make_path(const SensingTarget& t, const SubcarrierChannel& two_way, double tx_power = 1.0)
{
    return {std::sqrt(tx_power) * t.amplitude * two_way, t.location.range_m, t.velocity_mps};
}

/// Stationary NLoS scatterers drawn uniformly in the region. Their total
/// power is 1/K relative to a unit-amplitude target.
inline std::vector<SensingTarget> clutter_targets(const RegionOfInterest& region, const ChannelParams& params, Rng& rng)
{
    params.validate();
    std::vector<SensingTarget> out;
    const double nlos = params.nlos_amplitude();
    if (nlos == 0.0)
        return out;
    const double amp = nlos / (params.los_amplitude() * std::sqrt(static_cast<double>(params.n_scatterers)));
    for (int s = 0; s < params.n_scatterers; ++s) {
        const PolarPoint p = sample_point(region, rng);
        out.push_back({p, amp * complex_normal(rng), 0.0});
    }
    return out;
}

/// Draw order: L phase-noise samples, then noise column by column.
inline CMatrix synthesize_echo(const Frame& frame, const std::vector<EchoPath>& paths, const FrequencyGrid& grid,
                               const ChannelParams& params, Rng& rng)
{
    params.validate();
    const int M = frame.n_subcarriers();
    const int L = frame.n_symbols();
    if (grid.size() != M)
        throw std::invalid_argument("synthesize_echo: frame and frequency grid disagree on M");
    const double t_o = frame.symbol_duration(grid.bandwidth());

    CMatrix clean = CMatrix::Zero(M, L);
    for (const auto& p : paths) {
        if (p.gain.size() != M)
            throw std::invalid_argument("synthesize_echo: path gain length mismatch");
        const double tau = 2.0 * p.range_m / kSpeedOfLight;
        const double f_d = doppler_shift(p.velocity_mps, grid.fc());
        CVector col(M);
        for (int m = 0; m < M; ++m)
            col(m) = p.gain(m) * unit_phasor(-kTwoPi * grid.frequency(m) * tau);
        for (int l = 0; l < L; ++l)
            clean.col(l) += col * unit_phasor(kTwoPi * f_d * l * t_o);
    }

    const double phase_std = deg2rad(params.phase_noise_deg);
    CMatrix y(M, L);
    for (int l = 0; l < L; ++l) {
        const double phi = phase_std > 0.0 ? phase_std * standard_normal(rng) : 0.0;
        y.col(l) = clean.col(l).cwiseProduct(frame.symbols.col(l)) * unit_phasor(phi);
    }
    if (params.noise_power > 0.0)
        for (int l = 0; l < L; ++l)
            for (int m = 0; m < M; ++m)
                y(m, l) += complex_normal(rng, params.noise_power);
    return y;
}

/// Convenience form that evaluates the beams at every target location.
inline CMatrix synthesize_echo(const Frame& frame, const std::vector<SensingTarget>& targets, const Codeword& tx,
                               const Codeword& rx, const ArrayConfig& array, const FrequencyGrid& grid,
                               const ChannelParams& params, Rng& rng, double tx_power = 1.0)
{
    std::vector<EchoPath> paths;
    for (const auto& t : targets) {
        validate_point(t.location);
        if (t.location.is_far_field())
            throw std::invalid_argument("synthesize_echo: targets need a finite range");
        paths.push_back(make_path(t, two_way_response(tx, rx, steering_matrix(array, grid, t.location)), tx_power));
    }
    return synthesize_echo(frame, paths, grid, params, rng);
}

/// G[m][l] = Y[m][l] / S[m][l]
inline CMatrix channel_quotient(const CMatrix& y, const Frame& frame)
{
    if (y.rows() != frame.symbols.rows() || y.cols() != frame.symbols.cols())
        throw std::invalid_argument("channel_quotient: dimension mismatch");
    return y.cwiseQuotient(frame.symbols);
}

} // namespace nfisac
