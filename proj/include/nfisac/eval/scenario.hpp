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

// Experiment description shared by the Monte Carlo drivers, plus the
// codebook and combiner factories it selects between.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nfisac/codebook/classic.hpp"
#include "nfisac/codebook/fairness.hpp"
#include "nfisac/combiner.hpp"
#include "nfisac/radar/echo.hpp"
#include "nfisac/ttd.hpp"

namespace nfisac {

struct CodebookSpec {
    Method method = Method::fairness;
    int size = 12;
    int nf_distances = 3;       ///< rings per angle for nf_polar, far-field ring included
    int broadening_q = 4;
    int design_subcarriers = 16; ///< subcarriers used by the fairness optimiser
    PgdParams pgd;
    TtdConfig ttd;

    void validate(int n_elements) const
    {
        if (size < 1 || size > 1000)
            throw std::invalid_argument("CodebookSpec: size must lie in [1, 1000]");
        if (nf_distances < 2)
            throw std::invalid_argument("CodebookSpec: nf_distances must be >= 2");
        if (broadening_q < 1 || broadening_q > n_elements)
            throw std::invalid_argument("CodebookSpec: broadening_q must lie in [1, N]");
        if (design_subcarriers < 1)
            throw std::invalid_argument("CodebookSpec: design_subcarriers must be >= 1");
        pgd.validate();
        ttd.validate(n_elements);
    }
};

struct CombinerSpec {
    CombinerMethod method = CombinerMethod::mrc;
    double mu = 0.5;
    int guard_bins = 1;
    int crb_iters = 200;

    void validate(int n_subcarriers) const
    {
        if (!(mu >= 0.0 && mu <= 1.0))
            throw std::invalid_argument("CombinerSpec: mu must lie in [0, 1]");
        EsWeighting{0, guard_bins}.validate(n_subcarriers);
        if (crb_iters < 0)
            throw std::invalid_argument("CombinerSpec: crb_iters must be >= 0");
    }
};

struct DetectionSpec {
    double pfa_target = 1e-2;
    int gate_bins = 1;
    int calibration_trials = 2000;
    int padding = 1;

    void validate() const
    {
        if (!(pfa_target > 0.0 && pfa_target < 1.0))
            throw std::invalid_argument("DetectionSpec: pfa_target must lie in (0, 1)");
        if (gate_bins < 0)
            throw std::invalid_argument("DetectionSpec: gate_bins must be >= 0");
        if (calibration_trials * pfa_target < 1.0)
            throw std::invalid_argument("DetectionSpec: calibration_trials * pfa_target must be >= 1");
        if (padding < 1)
            throw std::invalid_argument("DetectionSpec: padding must be >= 1");
    }
};

inline RegionOfInterest desk_roi()
{
    RegionOfInterest roi;
    roi.r_min_m = 2.0;
    roi.r_max_m = 6.0;
    roi.r_step_m = 0.25;
    return roi;
}

/// Desk noise level: with unit transmit power it puts the 12-beam fairness
/// sweep near P_d = 0.8 at P_fa = 1e-2, away from both saturation ends.
inline ChannelParams desk_channel()
{
    ChannelParams p;
    p.noise_power = 1e4;
    return p;
}

struct Scenario {
    ArrayConfig array = ArrayConfig::half_wavelength(64, presets::kCarrierHz);
    FrequencyGrid grid{presets::kCarrierHz, 0.1 * presets::kCarrierHz, 256};
    int n_symbols = 16;
    double cp_fraction = 0.125;
    double tx_power = 1.0;
    RegionOfInterest roi = desk_roi();
    ChannelParams channel = desk_channel();
    CodebookSpec codebook;
    CombinerSpec combiner;
    DetectionSpec detection;
    int trials = 2000;
    std::uint64_t seed = 1;
    double velocity_max_mps = 0.0; ///< targets draw v uniformly from [-v, v]
    double comm_noise_power = 1.0;
    int n_users = 289;

    void validate() const
    {
        roi.validate();
        channel.validate();
        codebook.validate(array.n_elements());
        combiner.validate(grid.size());
        detection.validate();
        if (n_symbols < 1)
            throw std::invalid_argument("Scenario: n_symbols must be >= 1");
        if (!(cp_fraction >= 0.0))
            throw std::invalid_argument("Scenario: cp_fraction must be >= 0");
        if (!(tx_power >= 0.0))
            throw std::invalid_argument("Scenario: tx_power must be >= 0");
        if (trials < 1)
            throw std::invalid_argument("Scenario: trials must be >= 1");
        if (!(velocity_max_mps >= 0.0))
            throw std::invalid_argument("Scenario: velocity span must be >= 0");
        if (!(comm_noise_power > 0.0))
            throw std::invalid_argument("Scenario: comm_noise_power must be positive");
        if (n_users < 0)
            throw std::invalid_argument("Scenario: n_users must be >= 0");
    }

    double symbol_duration() const { return (1.0 + cp_fraction) * grid.size() / grid.bandwidth(); }
};

inline Codebook build_codebook(const Scenario& s, Method method, int size)
{
    switch (method) {
    case Method::ff: return ff_codebook(s.array, s.grid.fc(), s.roi, size);
    case Method::nf_polar: return nf_polar_codebook(s.array, s.grid.fc(), s.roi, size, s.codebook.nf_distances);
    case Method::broadening:
        return beam_broadening_codebook(s.array, s.grid, s.roi, size, s.codebook.broadening_q);
    case Method::fairness:
        return fairness_codebook(s.array, s.grid.resampled(s.codebook.design_subcarriers), s.roi, size,
                                 s.codebook.pgd);
    case Method::ttd: return ttd_codebook(s.array, s.grid, s.roi, size, s.codebook.ttd);
    }
    throw std::invalid_argument("build_codebook: unknown method");
}

inline Codebook build_codebook(const Scenario& s) { return build_codebook(s, s.codebook.method, s.codebook.size); }

/// Predicted two-way LoS channel of a codeword at its own focus.
inline SubcarrierChannel design_channel(const Scenario& s, const Codeword& cw)
{
    return two_way_response(cw, cw, steering_matrix(s.array, s.grid, cw.focus));
}

inline Combiner make_combiner(const CombinerSpec& spec, const SubcarrierChannel& h, const FrequencyGrid& grid)
{
    switch (spec.method) {
    case CombinerMethod::mrc: return mrc_combiner(h);
    case CombinerMethod::flat: return flat_combiner(static_cast<int>(h.size()));
    case CombinerMethod::es: return es_combiner(h, {0, spec.guard_bins});
    case CombinerMethod::combined: return combined_combiner(h, {0, spec.guard_bins}, spec.mu);
    case CombinerMethod::crb_min: return crb_min_combiner(h, 1.0, grid, spec.crb_iters);
    }
    throw std::invalid_argument("make_combiner: unknown method");
}

} // namespace nfisac
