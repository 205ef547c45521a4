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
// Combiner comparison at fixed target locations. Each location is sensed by
// the codeword with the largest line-of-sight gain there, refocused on the
// location; the combiner is designed from the two-way LoS channel at that
// point and the detector threshold is calibrated per location.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfisac/eval/sensing.hpp"

namespace nfisac {

struct CombinerCase {
    std::string label;
    CombinerSpec spec;
    std::optional<Codebook> codebook; ///< overrides the shared codebook when set
};

/// Locations shared by every case.
inline std::vector<PolarPoint> comparison_locations(const Scenario& s, int n_locations)
{
    if (n_locations < 1)
        throw std::invalid_argument("comparison_locations: need at least one location");
    Rng rng(derive_seed(s.seed, {stream::kLocation}));
    std::vector<PolarPoint> out;
    for (int i = 0; i < n_locations; ++i)
        out.push_back(sample_point(s.roi, rng));
    return out;
}

/// Index of the codeword with the largest beamformed LoS energy at p.
inline int best_codeword(const Codebook& cb, const ArrayConfig& array, const FrequencyGrid& grid, const PolarPoint& p)
{
    const SteeringMatrix a = steering_matrix(array, grid, p);
    int best = 0;
    double gain = -1.0;
    for (int c = 0; c < cb.size(); ++c) {
        const double g = beamformed_response(cb.codewords[c], a).squaredNorm();
        if (g > gain) {
            gain = g;
            best = c;
        }
    }
    return best;
}

/// Trial i at location l is trial l * per + i; its target sits at the location
/// with a random phase and zero velocity. per = ceil(trials / n_locations).
inline MetricsReport location_metrics(const Scenario& s, const Codebook& cb, const CombinerCase& cc,
                                      const std::vector<PolarPoint>& locations)
{
    cc.spec.validate(s.grid.size());
    s.detection.validate();
    const int n_loc = static_cast<int>(locations.size());
    const int per = (s.trials + n_loc - 1) / n_loc;
    const NoiseModel noise{s.grid, s.n_symbols, s.channel.noise_power, s.symbol_duration(), s.detection.padding};

    std::vector<TrialResult> all(static_cast<std::size_t>(n_loc) * per);
    for (int l = 0; l < n_loc; ++l) {
        Codeword cw = cb.codewords[best_codeword(cb, s.array, s.grid, locations[l])];
        cw.focus = locations[l];
        SensingSystem sys;
        sys.codebook.method = cb.method;
        sys.codebook.roi = cb.roi;
        sys.codebook.codewords = {cw};
        sys.combiners = {make_combiner(cc.spec, design_channel(s, cw), s.grid)};
        Rng cal(derive_seed(s.seed, {stream::kCalibration, static_cast<std::uint64_t>(l)}));
        sys.thresholds = {calibrate_threshold(noise, sys.combiners[0], s.detection.pfa_target,
                                              s.detection.calibration_trials, cal)};
        parallel_for(per, [&](int i) {
            const auto t = static_cast<std::uint64_t>(l) * per + i;
            Rng rng(derive_seed(s.seed, {t, stream::kTarget}));
            const SensingTarget target{locations[l], unit_phasor(uniform(rng, 0.0, kTwoPi)), 0.0};
            all[t] = sensing_trial(s, sys, target, t);
        });
    }
    return detection_metrics(all, cc.label, cb.size());
}

inline std::vector<MetricsReport> combiner_comparison(const Scenario& s, const Codebook& cb,
                                                      const std::vector<CombinerCase>& cases, int n_locations)
{
    s.validate();
    cb.validate();
    const auto locations = comparison_locations(s, n_locations);
    std::vector<MetricsReport> out;
    for (const auto& cc : cases)
        out.push_back(location_metrics(s, cc.codebook ? *cc.codebook : cb, cc, locations));
    return out;
}

} // namespace nfisac
