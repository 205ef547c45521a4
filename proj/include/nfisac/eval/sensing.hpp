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

// Monte Carlo sensing: per-trial beam sweep, detection metrics and the
// codebook-size sweep.
//
// Seeds: every random draw of trial t comes from
// derive_seed(master, {t, stream, ...}). The codebook method is not part of
// the key, so all methods see the same targets, clutter, frames and noise.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nfisac/core/parallel.hpp"
#include "nfisac/eval/scenario.hpp"
#include "nfisac/radar/detection.hpp"

namespace nfisac {

inline SensingTarget sample_target(const RegionOfInterest& roi, Rng& rng, double velocity_max_mps = 0.0)
{
    roi.validate();
    SensingTarget t;
    t.location = sample_point(roi, rng);
    t.amplitude = unit_phasor(uniform(rng, 0.0, kTwoPi));
    t.velocity_mps = uniform(rng, -velocity_max_mps, velocity_max_mps);
    return t;
}

/// A codebook with its per-codeword combiner and calibrated threshold.
struct SensingSystem {
    Codebook codebook;
    std::vector<Combiner> combiners;
    std::vector<double> thresholds;
};

inline SensingSystem prepare_system(const Scenario& s, Codebook codebook, const CombinerSpec& spec)
{
    codebook.validate();
    spec.validate(s.grid.size());
    s.detection.validate();
    const int n = codebook.size();
    SensingSystem sys{std::move(codebook), std::vector<Combiner>(n), std::vector<double>(n)};
    const NoiseModel noise{s.grid, s.n_symbols, s.channel.noise_power, s.symbol_duration(), s.detection.padding};
    parallel_for(n, [&](int c) {
        sys.combiners[c] = make_combiner(spec, design_channel(s, sys.codebook.codewords[c]), s.grid);
        Rng rng(derive_seed(s.seed, {stream::kCalibration, static_cast<std::uint64_t>(c)}));
        sys.thresholds[c] =
            calibrate_threshold(noise, sys.combiners[c], s.detection.pfa_target, s.detection.calibration_trials, rng);
    });
    return sys;
}

struct TrialResult {
    SensingTarget truth;
    bool detected = false;
    std::optional<TargetEstimate> estimate; ///< from the codeword with the largest in-gate peak
    int best_codeword = -1;
    int n_false_alarms = 0;
    std::vector<double> peak_values; ///< per-codeword map maximum
    std::optional<Detection> strongest; ///< strongest detection of the sweep, gated or not
    int strongest_codeword = -1;

    bool any_false_alarm() const { return n_false_alarms > 0; }
};

namespace detail {

/// Shared randomness and geometry of one trial.
struct TrialContext {
    Frame frame;
    std::vector<SensingTarget> scatterers; ///< target first, then clutter
    std::vector<SteeringMatrix> steering;
};

inline TrialContext make_trial_context(const Scenario& s, const SensingTarget& target, std::uint64_t trial)
{
    Rng clutter_rng(derive_seed(s.seed, {trial, stream::kClutter}));
    Rng frame_rng(derive_seed(s.seed, {trial, stream::kFrame}));
    TrialContext ctx;
    ctx.scatterers.push_back(target);
    for (auto& c : clutter_targets(s.roi, s.channel, clutter_rng))
        ctx.scatterers.push_back(c);
    ctx.frame = generate_frame(s.grid.size(), s.n_symbols, s.cp_fraction, frame_rng);
    for (const auto& t : ctx.scatterers)
        ctx.steering.push_back(steering_matrix(s.array, s.grid, t.location));
    return ctx;
}

/// Channel quotient G = Y / S observed through codeword c.
inline CMatrix codeword_quotient(const Scenario& s, const Codeword& cw, const TrialContext& ctx, std::uint64_t trial,
                                 std::uint64_t stream_id, std::uint64_t idx)
{
    std::vector<EchoPath> paths;
    for (std::size_t i = 0; i < ctx.scatterers.size(); ++i) {
        const SubcarrierChannel b = beamformed_response(cw, ctx.steering[i]);
        paths.push_back(make_path(ctx.scatterers[i], b.cwiseProduct(b), s.tx_power));
    }
    Rng echo_rng(derive_seed(s.seed, {trial, stream_id, idx}));
    return channel_quotient(synthesize_echo(ctx.frame, paths, s.grid, s.channel, echo_rng), ctx.frame);
}

inline DelayDopplerMap codeword_map(const Scenario& s, const SensingSystem& sys, const TrialContext& ctx,
                                    std::uint64_t trial, int c)
{
    return range_doppler_map(codeword_quotient(s, sys.codebook.codewords[c], ctx, trial, stream::kEcho,
                                                       static_cast<std::uint64_t>(c)), sys.combiners[c], s.grid,
                             ctx.frame.symbol_duration(s.grid.bandwidth()), s.detection.padding);
}

} // namespace detail

/// Delay-Doppler map seen through codeword c during trial `trial`.
inline DelayDopplerMap trial_map(const Scenario& s, const SensingSystem& sys, const SensingTarget& target,
                                 std::uint64_t trial, int c)
{
    if (c < 0 || c >= sys.codebook.size())
        throw std::out_of_range("trial_map: codeword index out of range");
    return detail::codeword_map(s, sys, detail::make_trial_context(s, target, trial), trial, c);
}

/// Sweeps every codeword over one target. Randomness is keyed on trial.
inline TrialResult sensing_trial(const Scenario& s, const SensingSystem& sys, const SensingTarget& target,
                                 std::uint64_t trial)
{
    const detail::TrialContext ctx = detail::make_trial_context(s, target, trial);
    TrialResult res;
    res.truth = target;
    res.peak_values.resize(sys.codebook.size());
    double best_in_gate = -1.0;
    double best_any = -1.0;
    for (int c = 0; c < sys.codebook.size(); ++c) {
        const DelayDopplerMap map = detail::codeword_map(s, sys, ctx, trial, c);
        res.peak_values[c] = map.values.maxCoeff();
        const DetectionReport rep = detect(map, sys.thresholds[c], {gate_for_target(map, target, s.detection.gate_bins)});
        res.n_false_alarms += rep.n_false_alarms();
        if (const Detection* d = rep.best_in_gate(0); d && d->value > best_in_gate) {
            best_in_gate = d->value;
            res.detected = true;
            res.best_codeword = c;
            res.estimate = estimate_target(map, *d);
        }
        for (const auto& d : rep.detections)
            if (d.value > best_any) {
                best_any = d.value;
                res.strongest = d;
                res.strongest_codeword = c;
            }
    }
    return res;
}

/// Target of trial t.
inline SensingTarget trial_target(const Scenario& s, std::uint64_t trial)
{
    Rng rng(derive_seed(s.seed, {trial, stream::kTarget}));
    return sample_target(s.roi, rng, s.velocity_max_mps);
}

inline std::vector<TrialResult> run_trials(const Scenario& s, const SensingSystem& sys)
{
    std::vector<TrialResult> out(s.trials);
    parallel_for(s.trials, [&](int t) {
        const auto trial = static_cast<std::uint64_t>(t);
        out[t] = sensing_trial(s, sys, trial_target(s, trial), trial);
    });
    return out;
}

struct MetricsReport {
    std::string method;
    int size = 0;
    int trials = 0;
    double pd = 0.0;
    double pd_ci = 0.0; ///< half-width of the 95% normal-approximation interval
    double pfa = 0.0;
    double pfa_ci = 0.0;
    std::optional<double> range_mse_m2; ///< absent when nothing was detected
};

/// 1.96 sqrt(p (1 - p) / n)
inline double binomial_ci(double p, int n) { return n > 0 ? 1.96 * std::sqrt(p * (1.0 - p) / n) : 0.0; }

inline MetricsReport detection_metrics(const std::vector<TrialResult>& results, std::string method = {}, int size = 0)
{
    if (results.empty())
        throw std::invalid_argument("detection_metrics: empty batch");
    MetricsReport m;
    m.method = std::move(method);
    m.size = size;
    m.trials = static_cast<int>(results.size());
    int n_det = 0, n_fa = 0;
    double se = 0.0;
    for (const auto& r : results) {
        n_fa += r.any_false_alarm() ? 1 : 0;
        if (r.detected) {
            ++n_det;
            if (r.estimate) {
                const double e = r.estimate->range_m - r.truth.location.range_m;
                se += e * e;
            }
        }
    }
    m.pd = static_cast<double>(n_det) / m.trials;
    m.pfa = static_cast<double>(n_fa) / m.trials;
    m.pd_ci = binomial_ci(m.pd, m.trials);
    m.pfa_ci = binomial_ci(m.pfa, m.trials);
    if (n_det > 0)
        m.range_mse_m2 = se / n_det;
    return m;
}

struct Evaluation {
    MetricsReport metrics;
    std::vector<TrialResult> trials;
};

inline Evaluation evaluate(const Scenario& s, Codebook codebook, const CombinerSpec& spec, std::string label)
{
    const int size = codebook.size();
    const SensingSystem sys = prepare_system(s, std::move(codebook), spec);
    auto trials = run_trials(s, sys);
    MetricsReport m = detection_metrics(trials, std::move(label), size);
    return {std::move(m), std::move(trials)};
}

/// P_d / P_fa / MSE per (method, size) with common random numbers.
inline std::vector<MetricsReport> size_sweep(const Scenario& s, const std::vector<int>& sizes,
                                             const std::vector<Method>& methods)
{
    s.validate();
    std::vector<MetricsReport> out;
    for (Method method : methods)
        for (int size : sizes) {
            if (size < 1 || size > 1000)
                throw std::invalid_argument("size_sweep: sizes must lie in [1, 1000]");
            out.push_back(
                evaluate(s, build_codebook(s, method, size), s.combiner, std::string(to_string(method))).metrics);
        }
    return out;
}

} // namespace nfisac
