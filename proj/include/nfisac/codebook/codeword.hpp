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

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nfisac/core/geometry.hpp"
#include "nfisac/core/steering.hpp"

namespace nfisac {

enum class Method { ff, nf_polar, broadening, fairness, ttd };

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::ff: return "ff";
    case Method::nf_polar: return "nf_polar";
    case Method::broadening: return "broadening";
    case Method::fairness: return "fairness";
    case Method::ttd: return "ttd";
    }
    return "unknown";
}

inline Method method_from_string(std::string_view s)
{
    for (Method m : {Method::ff, Method::nf_polar, Method::broadening, Method::fairness, Method::ttd})
        if (to_string(m) == s)
            return m;
    throw std::invalid_argument("unknown codebook method '" + std::string(s) + "'");
}

/// Analog beam weights. One row for phase-shifter (frequency-flat) codewords,
/// M rows for true-time-delay codewords. Every entry has modulus 1/sqrt(N).
struct Codeword {
    CMatrix weights;
    PolarPoint focus;
    Method method = Method::ff;

    int n_elements() const { return static_cast<int>(weights.cols()); }
    bool frequency_flat() const { return weights.rows() == 1; }

    /// Frequency-flat weights as a column vector.
    CVector flat() const
    {
        if (!frequency_flat())
            throw std::logic_error("Codeword: weights are frequency dependent");
        return weights.row(0).transpose();
    }
};

/// Codeword with frequency-dependent rows (TTD beams).
using FrequencyDependentCodeword = Codeword;

inline Codeword make_flat_codeword(const CVector& w, const PolarPoint& focus, Method method)
{
    return {w.transpose(), focus, method};
}

/// Largest deviation of |w_n| sqrt(N) from one.
inline double unit_modulus_error(const Codeword& cw)
{
    const double s = std::sqrt(static_cast<double>(cw.n_elements()));
    return (cw.weights.cwiseAbs() * s).array().unaryExpr([](double v) { return std::abs(v - 1.0); }).maxCoeff();
}

struct Codebook {
    std::vector<Codeword> codewords;
    RegionOfInterest roi;
    Method method = Method::ff;

    int size() const { return static_cast<int>(codewords.size()); }
    int n_elements() const { return codewords.empty() ? 0 : codewords.front().n_elements(); }

    void validate() const
    {
        if (codewords.empty())
            throw std::invalid_argument("Codebook: at least one codeword is required");
        for (const auto& cw : codewords)
            if (cw.n_elements() != n_elements())
                throw std::invalid_argument("Codebook: codewords disagree on the element count");
    }
};

/// Conjugate focusing codeword at fc: w_n = exp(+j 2 pi fc tau_n) / sqrt(N),
/// i.e. the complex conjugate of the steering row at the carrier.
inline CVector conjugate_focus_weights(const ArrayConfig& array, double fc_hz, const PolarPoint& p)
{
    const int n_el = array.n_elements();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_el));
    CVector w(n_el);
    for (int n = 0; n < n_el; ++n)
        w(n) = scale * unit_phasor(kTwoPi * fc_hz * element_delay(array.position(n), p));
    return w;
}

inline Codeword conjugate_focus_codeword(const ArrayConfig& array, double fc_hz, const PolarPoint& p,
                                         Method method = Method::nf_polar)
{
    return make_flat_codeword(conjugate_focus_weights(array, fc_hz, p), p, method);
}

inline SubcarrierChannel beamformed_response(const Codeword& w, const SteeringMatrix& a)
{
    return beamformed_response(w.weights, a);
}

} // namespace nfisac
