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
#include <gtest/gtest.h>

#include <cmath>

#include "nfisac/radar/detection.hpp"

using namespace nfisac;

namespace {

constexpr double kFc = 60e9;

ChannelParams quiet()
{
    ChannelParams p;
    p.noise_power = 0.0;
    p.phase_noise_deg = 0.0;
    p.n_scatterers = 0;
    return p;
}

// Noiseless quotient of one flat-gain path.
CMatrix path_quotient(const FrequencyGrid& g, int L, double range_m, double v_mps, cdouble alpha = 1.0)
{
    Rng rng(1);
    const Frame f = generate_frame(g.size(), L, 0.125, rng);
    const EchoPath p{SubcarrierChannel::Constant(g.size(), alpha), range_m, v_mps};
    return channel_quotient(synthesize_echo(f, {p}, g, quiet(), rng), f);
}

DelayDopplerMap flat_map(const CMatrix& q, const FrequencyGrid& g, int padding = 1)
{
    const double t_o = 1.125 * g.size() / g.bandwidth();
    return range_doppler_map(q, flat_combiner(g.size()), g, t_o, padding);
}

std::pair<int, int> argmax(const DelayDopplerMap& m)
{
    Eigen::Index k, q;
    m.values.maxCoeff(&k, &q);
    return {int(k), int(q)};
}

} // namespace

TEST(Frame, UnitModulusDeterministicAndTiming)
{
    Rng a(3), b(3);
    const Frame f = generate_frame(64, 8, 0.125, a);
    EXPECT_LT((f.symbols.cwiseAbs().array() - 1.0).abs().maxCoeff(), 1e-15);
    EXPECT_EQ(f.symbols, generate_frame(64, 8, 0.125, b).symbols);
    const Frame big{CMatrix(512, 1), 0.125};
    EXPECT_NEAR(big.symbol_duration(5e9), 115.2e-9, 1e-18);
    EXPECT_THROW(generate_frame(0, 1, 0.1, a), std::invalid_argument);
}

TEST(Echo, SilentAndMatchedCases)
{
    const FrequencyGrid g(kFc, 1e9, 1);
    Rng rng(5);
    const Frame f = generate_frame(1, 4, 0.125, rng);
    EXPECT_EQ(synthesize_echo(f, std::vector<EchoPath>{}, g, quiet(), rng), CMatrix::Zero(1, 4));

    const ArrayConfig a = ArrayConfig::half_wavelength(32, kFc);
    const PolarPoint p{3.0, 0.3};
    const Codeword cw = conjugate_focus_codeword(a, kFc, p);
    const CMatrix y = synthesize_echo(f, {SensingTarget{p, 1.0, 0.0}}, cw, cw, a, g, quiet(), rng);
    EXPECT_LT((y.cwiseAbs().array() - 32.0).abs().maxCoeff(), 1e-9);
    const CMatrix q = channel_quotient(y, f);
    EXPECT_LT((q.cwiseAbs().array() - 32.0).abs().maxCoeff(), 1e-9);
    for (int l = 1; l < 4; ++l)
        EXPECT_LT((q.col(l) - q.col(0)).norm(), 1e-9);
}

TEST(Echo, PhaseNoiseJitter)
{
    // Consecutive-symbol phase differences have std 2 deg * sqrt(2).
    const FrequencyGrid g(kFc, 1e9, 1);
    ChannelParams p = quiet();
    p.phase_noise_deg = 2.0;
    Rng rng(9);
    const int L = 10001;
    const Frame f = generate_frame(1, L, 0.125, rng);
    const CMatrix q = channel_quotient(synthesize_echo(f, {EchoPath{SubcarrierChannel::Ones(1), 0.0, 0.0}}, g, p, rng), f);
    double ss = 0.0;
    for (int l = 1; l < L; ++l) {
        const double d = std::arg(q(0, l) * std::conj(q(0, l - 1)));
        ss += d * d;
    }
    EXPECT_NEAR(rad2deg(std::sqrt(ss / (L - 1))), 2.0 * std::sqrt(2.0), 0.1 * 2.0 * std::sqrt(2.0));
}

TEST(Echo, QuotientPreservesNoisePower)
{
    const FrequencyGrid g(kFc, 1e9, 64);
    ChannelParams p = quiet();
    p.noise_power = 3.0;
    Rng rng(10);
    const Frame f = generate_frame(64, 256, 0.125, rng);
    const CMatrix y = synthesize_echo(f, std::vector<EchoPath>{}, g, p, rng);
    const CMatrix q = channel_quotient(y, f);
    EXPECT_NEAR(q.squaredNorm(), y.squaredNorm(), 1e-9 * y.squaredNorm());
    EXPECT_NEAR(q.squaredNorm() / q.size(), 3.0, 0.05 * 3.0);
}

TEST(Map, RangeBinOracle)
{
    const FrequencyGrid g(kFc, 5e9, 512);
    const DelayDopplerMap m = flat_map(path_quotient(g, 4, 7.5, 0.0), g);
    EXPECT_EQ(argmax(m), std::make_pair(250, 0));
    EXPECT_NEAR(m.range_per_bin, kSpeedOfLight / 1e10, 1e-15);
}

TEST(Map, OneDopplerBin)
{
    const FrequencyGrid g(kFc, 5e9, 64);
    const int L = 32;
    const double t_o = 1.125 * 64 / 5e9;
    const double v = kSpeedOfLight / (2 * kFc * L * t_o);
    const DelayDopplerMap m = flat_map(path_quotient(g, L, 1.2, v), g);
    EXPECT_EQ(argmax(m).second, 1);
    EXPECT_NEAR(m.velocity_per_bin, v, 1e-12 * v);
    const DelayDopplerMap back = flat_map(path_quotient(g, L, 1.2, -v), g);
    EXPECT_EQ(argmax(back).second, L - 1);
    EXPECT_EQ(back.signed_doppler(L - 1), -1);
}

TEST(Map, BinAlignedPlacements)
{
    const FrequencyGrid g(kFc, 5e9, 64);
    const int L = 16;
    const double t_o = 1.125 * 64 / 5e9;
    const double dv = kSpeedOfLight / (2 * kFc * L * t_o);
    Rng rng(17);
    std::uniform_int_distribution<int> kd(0, 63), qd(-8, 7);
    for (int t = 0; t < 100; ++t) {
        const int k = kd(rng), q = qd(rng);
        const DelayDopplerMap m = flat_map(path_quotient(g, L, k * kSpeedOfLight / 1e10, q * dv), g);
        EXPECT_EQ(argmax(m), std::make_pair(k, (q + L) % L));
    }
}

TEST(Map, PeakScalesWithAmplitudeSquared)
{
    const FrequencyGrid g(kFc, 5e9, 32);
    const double p1 = flat_map(path_quotient(g, 4, 0.9, 0.0, 1.0), g).values.maxCoeff();
    const double p2 = flat_map(path_quotient(g, 4, 0.9, 0.0, 2.0), g).values.maxCoeff();
    EXPECT_NEAR(p2 / p1, 4.0, 4e-9);
}

TEST(Threshold, QuantileDefinition)
{
    const FrequencyGrid g(kFc, 1e9, 16);
    const NoiseModel nm{g, 4, 1.0, 1e-7, 1};
    const Combiner v = flat_combiner(16);
    Rng a(4), b(4);
    const double eta = calibrate_threshold(nm, v, 0.5, 101, a);
    std::vector<double> maxima;
    for (int t = 0; t < 101; ++t) {
        CMatrix q(16, 4);
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 16; ++m)
                q(m, l) = complex_normal(b, 1.0);
        maxima.push_back(range_doppler_map(q, v, g, 1e-7).values.maxCoeff());
    }
    std::sort(maxima.begin(), maxima.end());
    EXPECT_EQ(eta, maxima[50]);

    NoiseModel silent = nm;
    silent.noise_power = 0.0;
    EXPECT_EQ(calibrate_threshold(silent, v, 0.1, 10, a), 0.0);
    silent.noise_power = 1e-12;
    EXPECT_LT(calibrate_threshold(silent, v, 0.1, 10, a), 1e-9);
    EXPECT_THROW(calibrate_threshold(nm, v, 0.01, 50, a), std::invalid_argument);
    EXPECT_THROW(calibrate_threshold(nm, v, 1.0, 50, a), std::invalid_argument);
}

TEST(Threshold, HoldOutFalseAlarmRate)
{
    const FrequencyGrid g(kFc, 1e9, 32);
    const NoiseModel nm{g, 8, 2.0, 1e-7, 1};
    const Combiner v = flat_combiner(32);
    for (double pfa : {0.1, 0.01}) {
        Rng cal(derive_seed(1, {1})), hold(derive_seed(1, {2}));
        const double eta = calibrate_threshold(nm, v, pfa, 20000, cal);
        const int n = 20000;
        int hits = 0;
        for (int t = 0; t < n; ++t) {
            CMatrix q(32, 8);
            for (int l = 0; l < 8; ++l)
                for (int m = 0; m < 32; ++m)
                    q(m, l) = complex_normal(hold, 2.0);
            hits += range_doppler_map(q, v, g, 1e-7).values.maxCoeff() > eta;
        }
        // both the calibration sample and the hold-out sample are binomial
        const double rate = double(hits) / n;
        EXPECT_NEAR(rate, pfa, 1.96 * std::sqrt(pfa * (1 - pfa) * (1.0 / n + 1.0 / 20000))) << pfa;
    }
}

TEST(Detect, CleanTargetAndEmptyMap)
{
    const FrequencyGrid g(kFc, 5e9, 64);
    const DelayDopplerMap m = flat_map(path_quotient(g, 8, 10 * kSpeedOfLight / 1e10, 0.0), g);
    const SensingTarget t{{10 * kSpeedOfLight / 1e10, 0.0}, 1.0, 0.0};
    const DetectionReport rep = detect(m, 0.5 * m.values.maxCoeff(), {gate_for_target(m, t)});
    ASSERT_EQ(rep.detections.size(), 1u);
    EXPECT_EQ(rep.detections[0].gate, 0);
    EXPECT_EQ(rep.detections[0].range_bin, 10);
    EXPECT_EQ(rep.n_false_alarms(), 0);
    for (const auto& d : rep.detections)
        EXPECT_GT(d.value, rep.threshold);

    DelayDopplerMap empty = m;
    empty.values.setZero();
    EXPECT_TRUE(detect(empty, 1e-3, {}).detections.empty());
    EXPECT_THROW(detect(m, 0.0, {}), std::invalid_argument);
}

TEST(Detect, CombSidelobesFoolMrcButNotEs)
{
    // Alternating deep notches alias half the energy of a matched filter to
    // k0 + M/2; the energy-spread design flattens the combined channel.
    const int M = 64;
    const FrequencyGrid g(kFc, 5e9, M);
    SubcarrierChannel h(M);
    for (int m = 0; m < M; ++m)
        h(m) = (m % 2 ? 0.2 : 1.0) * unit_phasor(0.3 * m);
    const int k0 = 12;
    CMatrix q(M, 1);
    for (int m = 0; m < M; ++m)
        q(m, 0) = h(m) * unit_phasor(-kTwoPi * (g.frequency(m) - g.frequency(0)) * k0 / 5e9);
    const double t_o = 1.125 * M / 5e9;
    const Gate gate{k0, 0, 1, 1};
    const DelayDopplerMap mrc = range_doppler_map(q, mrc_combiner(h), g, t_o);
    const DelayDopplerMap es = range_doppler_map(q, es_combiner(h, EsWeighting{0, 1}), g, t_o);
    const double eta = 0.5 * mrc.values(k0, 0);
    EXPECT_GT(mrc.values(k0 + M / 2, 0), eta);
    EXPECT_GE(detect(mrc, eta, {gate}).n_false_alarms(), 1);
    EXPECT_EQ(detect(es, eta, {gate}).n_false_alarms(), 0);
}

TEST(Detect, LocalMaximaTieBreak)
{
    DelayDopplerMap m;
    m.values = RMatrix::Zero(8, 4);
    m.values(3, 1) = 5.0;
    m.values(3, 2) = 5.0; // plateau: only the lower (k, q) survives
    m.values(6, 0) = 2.0;
    m.range_per_bin = 1.0;
    m.velocity_per_bin = 1.0;
    const DetectionReport rep = detect(m, 1.0, {Gate{6, 0, 0, 0}});
    ASSERT_EQ(rep.detections.size(), 2u);
    EXPECT_EQ(rep.detections[0].range_bin, 3);
    EXPECT_EQ(rep.detections[0].doppler_bin, 1);
    EXPECT_TRUE(rep.detections[0].false_alarm());
    EXPECT_EQ(rep.detections[1].gate, 0);
}

TEST(Estimate, OnBinOffGridAndStatic)
{
    const FrequencyGrid g(kFc, 5e9, 256);
    const double bin = kSpeedOfLight / 1e10;
    {
        const DelayDopplerMap m = flat_map(path_quotient(g, 8, 40 * bin, 0.0), g);
        const TargetEstimate e = estimate_target(m, 40, 0);
        EXPECT_LT(std::abs(e.range_m - 40 * bin), 1e-9);
        EXPECT_EQ(e.range_offset_bins, 0.0);
        EXPECT_LT(std::abs(e.velocity_mps), 0.5 * m.velocity_per_bin);
    }
    for (double frac : {0.1, 0.3, 0.45, -0.3}) {
        const double r = (40 + frac) * bin;
        const DelayDopplerMap m = flat_map(path_quotient(g, 8, r, 0.0), g);
        const auto [k, q] = argmax(m);
        const TargetEstimate e = estimate_target(m, k, q);
        EXPECT_LT(std::abs(e.range_m - r), 0.5 * bin) << frac;
        EXPECT_LE(std::abs(e.range_offset_bins), 0.5);
    }
    // edge bin: nothing to interpolate against on the clipped side
    const DelayDopplerMap edge = flat_map(path_quotient(g, 8, 0.0, 0.0), g);
    EXPECT_EQ(estimate_target(edge, 0, 0).range_offset_bins, 0.0);
}

TEST(Detect, DeterministicReports)
{
    const FrequencyGrid g(kFc, 5e9, 64);
    ChannelParams p = quiet();
    p.noise_power = 0.5;
    auto run = [&] {
        Rng rng(77);
        const Frame f = generate_frame(64, 8, 0.125, rng);
        const CMatrix q =
            channel_quotient(synthesize_echo(f, {EchoPath{SubcarrierChannel::Ones(64), 0.6, 0.0}}, g, p, rng), f);
        return detect(flat_map(q, g), 20.0, {Gate{20, 0, 1, 1}});
    };
    const auto a = run(), b = run();
    ASSERT_EQ(a.detections.size(), b.detections.size());
    for (std::size_t i = 0; i < a.detections.size(); ++i) {
        EXPECT_EQ(a.detections[i].value, b.detections[i].value);
        EXPECT_EQ(a.detections[i].range_bin, b.detections[i].range_bin);
    }
}

TEST(Clutter, PowerRelativeToTarget)
{
    ChannelParams p;
    p.rician_k_db = 10.0;
    p.n_scatterers = 4;
    Rng rng(3);
    double power = 0.0;
    const int n = 5000;
    for (int t = 0; t < n; ++t)
        for (const auto& c : clutter_targets(RegionOfInterest{}, p, rng)) {
            power += std::norm(c.amplitude);
            EXPECT_EQ(c.velocity_mps, 0.0);
        }
    EXPECT_NEAR(power / n, 0.1, 0.005);
    p.n_scatterers = 0;
    EXPECT_TRUE(clutter_targets(RegionOfInterest{}, p, rng).empty());
}
