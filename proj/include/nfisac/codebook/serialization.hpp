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

// Codebook JSON:
//   {"n_elements": N, "method": "...",
//    "codewords": [{"focus": {"r": float|null, "theta_deg": float},
//                   "weights": [[re, im], ...]}]}
// TTD codewords store one [[re, im], ...] row per subcarrier instead.

#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nfisac/codebook/codeword.hpp"

namespace nfisac {

namespace detail {

inline nlohmann::json row_to_json(const CMatrix& w, Eigen::Index row)
{
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index n = 0; n < w.cols(); ++n)
        out.push_back({w(row, n).real(), w(row, n).imag()});
    return out;
}

inline void row_from_json(const nlohmann::json& j, CMatrix& w, Eigen::Index row)
{
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != w.cols())
        throw std::invalid_argument("codebook JSON: weight row has the wrong length");
    for (Eigen::Index n = 0; n < w.cols(); ++n) {
        const auto& e = j[static_cast<std::size_t>(n)];
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("codebook JSON: weights must be [re, im] pairs");
        w(row, n) = {e[0].get<double>(), e[1].get<double>()};
    }
}

} // namespace detail

inline nlohmann::json to_json(const Codebook& cb)
{
    nlohmann::json j;
    j["n_elements"] = cb.n_elements();
    j["method"] = std::string(to_string(cb.method));
    j["codewords"] = nlohmann::json::array();
    for (const auto& cw : cb.codewords) {
        nlohmann::json c;
        c["focus"]["r"] = cw.focus.is_far_field() ? nlohmann::json(nullptr) : nlohmann::json(cw.focus.range_m);
        c["focus"]["theta_deg"] = rad2deg(cw.focus.angle_rad);
        if (cw.frequency_flat()) {
            c["weights"] = detail::row_to_json(cw.weights, 0);
        } else {
            c["weights"] = nlohmann::json::array();
            for (Eigen::Index m = 0; m < cw.weights.rows(); ++m)
                c["weights"].push_back(detail::row_to_json(cw.weights, m));
        }
        j["codewords"].push_back(std::move(c));
    }
    return j;
}

inline Codebook codebook_from_json(const nlohmann::json& j)
{
    try {
        Codebook cb;
        const int n_el = j.at("n_elements").get<int>();
        cb.method = method_from_string(j.at("method").get<std::string>());
        for (const auto& c : j.at("codewords")) {
            Codeword cw;
            cw.method = cb.method;
            const auto& r = c.at("focus").at("r");
            cw.focus.range_m = r.is_null() ? std::numeric_limits<double>::infinity() : r.get<double>();
            cw.focus.angle_rad = deg2rad(c.at("focus").at("theta_deg").get<double>());
            const auto& w = c.at("weights");
            if (!w.is_array() || w.empty())
                throw std::invalid_argument("codebook JSON: empty weights");
            const bool per_subcarrier = w[0].is_array() && !w[0].empty() && w[0][0].is_array();
            if (per_subcarrier) {
                cw.weights.resize(static_cast<Eigen::Index>(w.size()), n_el);
                for (std::size_t m = 0; m < w.size(); ++m)
                    detail::row_from_json(w[m], cw.weights, static_cast<Eigen::Index>(m));
            } else {
                cw.weights.resize(1, n_el);
                detail::row_from_json(w, cw.weights, 0);
            }
            cb.codewords.push_back(std::move(cw));
        }
        cb.validate();
        return cb;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("codebook JSON: ") + e.what());
    }
}

} // namespace nfisac
