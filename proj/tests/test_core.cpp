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
#include <numeric>

#include "nfisac/core/channel.hpp"
#include "nfisac/core/parallel.hpp"
#include "nfisac/codebook/codeword.hpp"

using namespace nfisac;

namespace {

constexpr double kFc = 60e9;

// Single-tone grid at f.
FrequencyGrid tone(double f) { return {f, 1.0, 1}; }

double wrap(double x) { return std::remainder(x, kTwoPi); }

} // namespace

TEST(Geometry, ElementPositionsSymmetric)
{
    const auto x = element_positions(ArrayConfig(3, 1.0));
    ASSERT_EQ(x.size(), 3u);
    EXPECT_DOUBLE_EQ(x[0], -1.0);
    EXPECT_DOUBLE_EQ(x[1], 0.0);
    EXPECT_DOUBLE_EQ(x[2], 1.0);

    const auto y = element_positions(ArrayConfig(2, 0.0025));
    EXPECT_DOUBLE_EQ(y[0], -0.00125);
    EXPECT_DOUBLE_EQ(y[1], 0.00125);
}

TEST(Geometry, FullScaleAperture)
{
    const ArrayConfig a(400, 0.0025);
    EXPECT_DOUBLE_EQ(a.aperture_m(), 0.9975);
    EXPECT_NEAR(a.aperture_m(), 1.0, a.spacing_m());
    EXPECT_NEAR(presets::ula_400().spacing_m(), 0.0025, 2e-6);
    EXPECT_NEAR(presets::aperture_1m().aperture_m(), 1.0, presets::aperture_1m().spacing_m());
}

TEST(Geometry, FraunhoferDistance)
{
    const double lam = wavelength(kFc);
    // aperture is (N-1) d, so pick d to hit D exactly
    EXPECT_NEAR(fraunhofer_distance(ArrayConfig(2, 1.0), kFc), 2.0 / lam, 1e-9);
    EXPECT_NEAR(fraunhofer_distance(ArrayConfig(2, 1.0), kFc), 400.27, 0.01);
    EXPECT_NEAR(fraunhofer_distance(ArrayConfig(2, 0.1), kFc), 4.0027, 1e-4);
    EXPECT_NEAR(fraunhofer_distance(ArrayConfig(2, 1.0), 2 * kFc), 800.55, 0.01);
    EXPECT_THROW(fraunhofer_distance(ArrayConfig(2, 1.0), 0.0), std::invalid_argument);
}

TEST(Geometry, FrequencyGridCentred)
{
    const FrequencyGrid g(kFc, 6e9, 256);
    const auto f = g.frequencies();
    for (std::size_t m = 1; m < f.size(); ++m)
        EXPECT_GT(f[m], f[m - 1]);
    const double mean = std::accumulate(f.begin(), f.end(), 0.0) / f.size();
    EXPECT_NEAR(mean, kFc, 1e-15 * kFc * 256);
    EXPECT_DOUBLE_EQ(g.frequency(0), kFc - 3e9 + 0.5 * 6e9 / 256);
    EXPECT_THROW(FrequencyGrid(1e9, 2e9, 4), std::invalid_argument);
    EXPECT_THROW(FrequencyGrid(kFc, 1e9, 0), std::invalid_argument);
    EXPECT_THROW(ArrayConfig(1, 1.0), std::invalid_argument);
    EXPECT_THROW(ArrayConfig(4, 0.0), std::invalid_argument);
}

TEST(Steering, UnitMagnitudeEverywhere)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(64, kFc);
    const FrequencyGrid g(kFc, 6e9, 32);
    for (const PolarPoint p : {PolarPoint{2.0, 0.3}, PolarPoint{0.05, -1.2}, PolarPoint::far_field(0.7)}) {
        const CMatrix v = steering_matrix(a, g, p).values;
        EXPECT_LT((v.cwiseAbs().array() - 1.0).abs().maxCoeff(), 1e-12);
    }
}

TEST(Steering, BroadsideFarFieldIsAllOnes)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(16, kFc);
    const CMatrix v = ff_steering_matrix(a, FrequencyGrid(kFc, 6e9, 8), 0.0).values;
    EXPECT_LT((v.array() - cdouble(1.0, 0.0)).abs().maxCoeff(), 1e-15);
    // centre element carries zero phase
    const CMatrix c = nf_steering_matrix(ArrayConfig::half_wavelength(5, kFc), tone(kFc), {3.0, 0.4}).values;
    EXPECT_NEAR(std::arg(c(0, 2)), 0.0, 1e-15);
}

TEST(Steering, FarFieldFormula)
{
    // N = 2: x_1 = lambda/4, so phase = 2 pi (1/4) sin 45 at element 1 ...
    // and the pair differs by 2 pi (1/2) sin 45 = pi sqrt(2) / 2.
    const ArrayConfig a = ArrayConfig::half_wavelength(2, kFc);
    const CMatrix v = ff_steering_matrix(a, tone(kFc), deg2rad(45.0)).values;
    EXPECT_NEAR(wrap(std::arg(v(0, 1)) - std::arg(v(0, 0))), kPi * std::sqrt(2.0) / 2.0, 1e-12);
}

TEST(Steering, NearFieldPairPhaseApproachesFarField)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(2, kFc);
    double prev = 1e9;
    for (double r : {1.0, 10.0, 100.0, 1000.0}) {
        const CMatrix v = nf_steering_matrix(a, tone(kFc), {r, deg2rad(30.0)}).values;
        const double err = std::abs(wrap(std::arg(v(0, 1)) - std::arg(v(0, 0))) - kPi / 2.0);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-8);
}

TEST(Steering, NearFieldMatchesFarFieldBeyondFraunhofer)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(64, kFc);
    const FrequencyGrid g(kFc, 6e9, 16);
    const double rf = fraunhofer_distance(a, kFc);
    const double th = deg2rad(25.0);
    const CMatrix ff = ff_steering_matrix(a, g, th).values;
    double prev = 1e9;
    for (double k : {1.0, 3.0, 10.0, 100.0}) {
        const CMatrix nf = nf_steering_matrix(a, g, {k * rf, th}).values;
        const double err = (nf.array() * ff.array().conjugate()).arg().abs().maxCoeff();
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-2);
}

TEST(Steering, RejectsNonPositiveRange)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(4, kFc);
    EXPECT_THROW(nf_steering_matrix(a, tone(kFc), {0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(nf_steering_matrix(a, tone(kFc), {-1.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(validate_point({1.0, kPi / 2}), std::invalid_argument);
}

TEST(Beamforming, MatchedFocusGainIsN)
{
    for (int n : {2, 17, 64, 512}) {
        const ArrayConfig a = ArrayConfig::half_wavelength(n, kFc);
        for (const PolarPoint p : {PolarPoint{1.5, 0.2}, PolarPoint{40.0, -0.9}, PolarPoint::far_field(0.5)}) {
            const auto cw = conjugate_focus_codeword(a, kFc, p);
            const cdouble b = beamformed_response(cw, steering_matrix(a, tone(kFc), p))(0);
            EXPECT_NEAR(std::norm(b), n, 1e-9 * n);
            EXPECT_NEAR(b.real(), std::sqrt(double(n)), 1e-9 * n);
        }
    }
}

TEST(Beamforming, SquintLawAtUpperBandEdge)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(64, kFc);
    const auto cw = conjugate_focus_codeword(a, kFc, PolarPoint::far_field(deg2rad(45.0)), Method::ff);
    double best = 0.0, peak = 0.0;
    for (double deg = 38.0; deg <= 47.0; deg += 0.01) {
        const double g = std::norm(beamformed_response(cw, ff_steering_matrix(a, tone(1.05 * kFc), deg2rad(deg)))(0));
        if (g > best) {
            best = g;
            peak = deg;
        }
    }
    EXPECT_NEAR(peak, 42.33, 0.01);
    EXPECT_NEAR(peak, rad2deg(std::asin(std::sin(deg2rad(45.0)) / 1.05)), 0.01);
}

TEST(Beamforming, SquintLawAcrossSubcarriers)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(64, kFc);
    const FrequencyGrid g(kFc, 6e9, 8);
    const double th0 = deg2rad(30.0);
    const auto cw = conjugate_focus_codeword(a, kFc, PolarPoint::far_field(th0), Method::ff);
    const double step = 0.02;
    for (int m = 0; m < g.size(); ++m) {
        double best = 0.0, peak = 0.0;
        for (double deg = 25.0; deg <= 36.0; deg += step) {
            const double v =
                std::norm(beamformed_response(cw, ff_steering_matrix(a, tone(g.frequency(m)), deg2rad(deg)))(0));
            if (v > best) {
                best = v;
                peak = deg;
            }
        }
        EXPECT_NEAR(peak, rad2deg(std::asin(kFc / g.frequency(m) * std::sin(th0))), step);
    }
}

TEST(Beamforming, CauchySchwarzBound)
{
    Rng rng(7);
    const ArrayConfig a = ArrayConfig::half_wavelength(32, kFc);
    const FrequencyGrid g(kFc, 6e9, 16);
    for (int t = 0; t < 20; ++t) {
        CVector w(32);
        for (auto& v : w)
            v = complex_normal(rng);
        w.normalize();
        const auto b = beamformed_response(CMatrix(w.transpose()), steering_matrix(a, g, sample_point(RegionOfInterest{}, rng)));
        EXPECT_LE(beam_gain(b).maxCoeff(), 32.0 + 1e-9);
    }
}

TEST(Beamforming, DimensionMismatchThrows)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(8, kFc);
    const auto s = steering_matrix(a, FrequencyGrid(kFc, 6e9, 4), {2.0, 0.0});
    EXPECT_THROW(beamformed_response(CMatrix::Ones(1, 7), s), std::invalid_argument);
    EXPECT_THROW(beamformed_response(CMatrix::Ones(3, 8), s), std::invalid_argument);
    EXPECT_NO_THROW(beamformed_response(CMatrix::Ones(4, 8), s));
}

TEST(Channel, InfiniteKIsPureLineOfSight)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(16, kFc);
    const FrequencyGrid g(kFc, 6e9, 8);
    const PolarPoint p{3.0, 0.2};
    ChannelParams c;
    c.rician_k_db = std::numeric_limits<double>::infinity();
    Rng rng(1);
    EXPECT_EQ(synthesize_user_channel(a, g, p, c, RegionOfInterest{}, rng), steering_matrix(a, g, p).values);
    c.rician_k_db = 10.0;
    c.n_scatterers = 0;
    EXPECT_EQ(synthesize_user_channel(a, g, p, c, RegionOfInterest{}, rng), steering_matrix(a, g, p).values);
}

TEST(Channel, SameSeedIsBitIdentical)
{
    const ArrayConfig a = ArrayConfig::half_wavelength(16, kFc);
    const FrequencyGrid g(kFc, 6e9, 8);
    ChannelParams c;
    Rng r1(derive_seed(5, {1, 2})), r2(derive_seed(5, {1, 2}));
    const CMatrix h1 = synthesize_user_channel(a, g, {3.0, 0.1}, c, RegionOfInterest{}, r1);
    const CMatrix h2 = synthesize_user_channel(a, g, {3.0, 0.1}, c, RegionOfInterest{}, r2);
    EXPECT_TRUE(h1 == h2);
}

TEST(Channel, NlosPowerFractionAndEnergyConservation)
{
    // 1e4 draws of the diffuse part against the LoS part.
    const ArrayConfig a = ArrayConfig::half_wavelength(8, kFc);
    const FrequencyGrid g = tone(kFc);
    const PolarPoint p{9.0, 0.1};
    const CMatrix los = steering_matrix(a, g, p).values;
    for (double k_db : {0.0, 10.0, 30.0}) {
        ChannelParams c;
        c.rician_k_db = k_db;
        Rng rng(derive_seed(11, {static_cast<std::uint64_t>(k_db)}));
        double nlos = 0.0, total = 0.0;
        const int n = 10000;
        for (int t = 0; t < n; ++t) {
            const CMatrix h = synthesize_user_channel(a, g, p, c, RegionOfInterest{}, rng);
            nlos += (h - c.los_amplitude() * los).squaredNorm();
            total += h.squaredNorm();
        }
        const double k = std::pow(10.0, k_db / 10.0);
        EXPECT_NEAR(nlos / total, 1.0 / (1.0 + k), 0.1 / (1.0 + k)) << k_db;
        EXPECT_NEAR(total / n, 8.0, 0.05 * 8.0) << k_db;
    }
}

TEST(Random, DeriveSeedIsStableAndKeySensitive)
{
    EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(2, {2, 3}));
    EXPECT_NE(derive_seed(1, {2}), derive_seed(1, {2, 0}));
}

TEST(Parallel, MatchesSequentialLoop)
{
    std::vector<double> a(1000), b(1000);
    for (int i = 0; i < 1000; ++i) {
        Rng r(derive_seed(3, {static_cast<std::uint64_t>(i)}));
        a[i] = uniform(r, 0, 1);
    }
    parallel_for(1000, [&](int i) {
        Rng r(derive_seed(3, {static_cast<std::uint64_t>(i)}));
        b[i] = uniform(r, 0, 1);
    }, 4);
    EXPECT_EQ(a, b);
    EXPECT_THROW(parallel_for(10, [](int i) { if (i == 7) throw std::runtime_error("x"); }, 3), std::runtime_error);
}
