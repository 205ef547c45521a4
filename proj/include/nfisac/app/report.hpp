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

// CSV and JSON report writers. Numbers are printed with 17 significant
// digits; every CSV has a JSON mirror holding the same values. Files are
// written to a temporary name and renamed into place.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfisac/eval/coverage.hpp"
#include "nfisac/eval/sensing.hpp"
#include "nfisac/eval/throughput.hpp"
#include "nfisac/radar/map.hpp"

namespace nfisac {

inline std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << text;
        out.flush();
        if (!out)
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j)
{
    write_text_file(path, j.dump(2) + "\n");
}

/// Header line plus one comma-joined row per entry.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const
    {
        std::string out;
        auto line = [&out](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i)
                    out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows)
            line(r);
        return out;
    }
};

// --- metrics -----------------------------------------------------------

inline CsvTable metrics_table(const std::vector<MetricsReport>& reports)
{
    CsvTable t{{"method", "size", "trials", "pd", "pd_ci", "pfa", "pfa_ci", "range_mse_m2"}, {}};
    for (const auto& r : reports)
        t.rows.push_back({r.method, std::to_string(r.size), std::to_string(r.trials), format_number(r.pd),
                          format_number(r.pd_ci), format_number(r.pfa), format_number(r.pfa_ci),
                          r.range_mse_m2 ? format_number(*r.range_mse_m2) : std::string()});
    return t;
}

inline nlohmann::json metrics_json(const std::vector<MetricsReport>& reports)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports)
        j.push_back({{"method", r.method},
                     {"size", r.size},
                     {"trials", r.trials},
                     {"pd", r.pd},
                     {"pd_ci", r.pd_ci},
                     {"pfa", r.pfa},
                     {"pfa_ci", r.pfa_ci},
                     {"range_mse_m2", r.range_mse_m2 ? nlohmann::json(*r.range_mse_m2) : nlohmann::json(nullptr)}});
    return j;
}

// --- delay-Doppler map ---------------------------------------------------

inline CsvTable map_table(const DelayDopplerMap& map)
{
    CsvTable t{{"k", "q", "range_m", "velocity_mps", "value"}, {}};
    for (int k = 0; k < map.n_range_bins(); ++k)
        for (int q = 0; q < map.n_doppler_bins(); ++q)
            t.rows.push_back({std::to_string(k), std::to_string(q), format_number(map.range_m(k)),
                              format_number(map.velocity_mps(map.signed_doppler(q))),
                              format_number(map.values(k, q))});
    return t;
}

inline nlohmann::json map_json(const DelayDopplerMap& map)
{
    nlohmann::json j;
    j["range_per_bin_m"] = map.range_per_bin;
    j["velocity_per_bin_mps"] = map.velocity_per_bin;
    j["n_range_bins"] = map.n_range_bins();
    j["n_doppler_bins"] = map.n_doppler_bins();
    j["cells"] = nlohmann::json::array();
    for (int k = 0; k < map.n_range_bins(); ++k)
        for (int q = 0; q < map.n_doppler_bins(); ++q)
            j["cells"].push_back({{"k", k},
                                  {"q", q},
                                  {"range_m", map.range_m(k)},
                                  {"velocity_mps", map.velocity_mps(map.signed_doppler(q))},
                                  {"value", map.values(k, q)}});
    return j;
}

// --- coverage --------------------------------------------------------------

inline CsvTable coverage_table(const CoverageMap& cov)
{
    CsvTable t{{"theta_deg", "range_m", "value"}, {}};
    for (std::size_t i = 0; i < cov.thetas_rad.size(); ++i)
        for (std::size_t r = 0; r < cov.ranges_m.size(); ++r)
            t.rows.push_back({format_number(rad2deg(cov.thetas_rad[i])), format_number(cov.ranges_m[r]),
                              format_number(cov.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)))});
    return t;
}

inline nlohmann::json coverage_json(const CoverageMap& cov)
{
    nlohmann::json j;
    j["n_theta"] = cov.thetas_rad.size();
    j["n_range"] = cov.ranges_m.size();
    j["min_value"] = cov.min_value();
    j["max_value"] = cov.max_value();
    j["cells"] = nlohmann::json::array();
    for (std::size_t i = 0; i < cov.thetas_rad.size(); ++i)
        for (std::size_t r = 0; r < cov.ranges_m.size(); ++r)
            j["cells"].push_back({{"theta_deg", rad2deg(cov.thetas_rad[i])},
                                  {"range_m", cov.ranges_m[r]},
                                  {"value", cov.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r))}});
    return j;
}

// --- end-to-end throughput -------------------------------------------------

inline CsvTable e2e_table(const std::vector<E2eRow>& rows)
{
    CsvTable t{{"user_r", "user_theta_deg", "detected", "mode", "se_bits", "se_upper", "se_lower"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({format_number(r.user.range_m), format_number(rad2deg(r.user.angle_rad)),
                          r.detected ? "1" : "0", r.mode, format_number(r.se), format_number(r.se_upper),
                          format_number(r.se_lower)});
    return t;
}

inline nlohmann::json e2e_json(const std::vector<E2eRow>& rows)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows)
        j.push_back({{"user_r", r.user.range_m},
                     {"user_theta_deg", rad2deg(r.user.angle_rad)},
                     {"detected", r.detected},
                     {"mode", r.mode},
                     {"se_bits", r.se},
                     {"se_upper", r.se_upper},
                     {"se_lower", r.se_lower}});
    return j;
}

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json.
inline void write_report(const std::filesystem::path& dir, const std::string& stem, const CsvTable& csv,
                         const nlohmann::json& json)
{
    write_text_file(dir / (stem + ".csv"), csv.str());
    write_json_file(dir / (stem + ".json"), json);
}

} // namespace nfisac
