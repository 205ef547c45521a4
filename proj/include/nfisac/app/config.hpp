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

// Strict JSON run configuration. Every block is optional and falls back to
// the desk-scale defaults; unknown keys and wrongly typed or out-of-range
// values are rejected with the dotted field path in the message.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfisac/eval/scenario.hpp"

namespace nfisac {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    Scenario scenario;
    std::vector<int> sweep_sizes{6, 12, 24};
    std::vector<Method> sweep_methods{Method::ff, Method::nf_polar, Method::fairness};
    std::vector<CombinerMethod> combiner_methods{CombinerMethod::mrc, CombinerMethod::es, CombinerMethod::combined,
                                                 CombinerMethod::flat};
    int combiner_locations = 20;
    std::string output_dir = "out";
};

namespace detail {

/// Walks one JSON object, tracking which keys were consumed.
class Block {
public:
    Block(const nlohmann::json* j, std::string path) : j_(j), path_(std::move(path))
    {
        if (j_ && !j_->is_object())
            throw ConfigError("config: '" + path_ + "' must be an object");
    }

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return j_ && j_->contains(key);
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    Block child(const std::string& key)
    {
        return {has(key) ? &j_->at(key) : nullptr, field(key)};
    }

    void number(const std::string& key, double& out)
    {
        if (!has(key))
            return;
        const auto& v = j_->at(key);
        if (!v.is_number())
            throw ConfigError("config: '" + field(key) + "' must be a number");
        out = v.get<double>();
        if (!std::isfinite(out))
            throw ConfigError("config: '" + field(key) + "' must be finite");
    }

    void positive(const std::string& key, double& out)
    {
        number(key, out);
        if (!(out > 0.0))
            throw ConfigError("config: '" + field(key) + "' must be positive");
    }

    void nonnegative(const std::string& key, double& out)
    {
        number(key, out);
        if (!(out >= 0.0))
            throw ConfigError("config: '" + field(key) + "' must be >= 0");
    }

    void integer(const std::string& key, int& out, long long lo)
    {
        if (!has(key))
            return;
        const auto& v = j_->at(key);
        if (!v.is_number_integer())
            throw ConfigError("config: '" + field(key) + "' must be an integer");
        const auto x = v.get<long long>();
        if (x < lo || x > 1000000000LL)
            throw ConfigError("config: '" + field(key) + "' must be >= " + std::to_string(lo));
        out = static_cast<int>(x);
    }

    void seed(const std::string& key, std::uint64_t& out)
    {
        if (!has(key))
            return;
        const auto& v = j_->at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError("config: '" + field(key) + "' must be a non-negative integer");
        out = v.get<std::uint64_t>();
    }

    void string(const std::string& key, std::string& out)
    {
        if (!has(key))
            return;
        const auto& v = j_->at(key);
        if (!v.is_string())
            throw ConfigError("config: '" + field(key) + "' must be a string");
        out = v.get<std::string>();
    }

    template <class Parse>
    void parsed(const std::string& key, Parse&& parse)
    {
        std::string s;
        if (!has(key))
            return;
        string(key, s);
        try {
            parse(s);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config: '" + field(key) + "': " + e.what());
        }
    }

    const nlohmann::json* raw(const std::string& key) { return has(key) ? &j_->at(key) : nullptr; }

    void finish() const
    {
        if (!j_)
            return;
        for (const auto& [key, value] : j_->items())
            if (!seen_.count(key))
                throw ConfigError("config: unknown key '" + field(key) + "'");
    }

private:
    const nlohmann::json* j_;
    std::string path_;
    std::set<std::string> seen_;
};

} // namespace detail

inline RunConfig parse_config(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");
    RunConfig cfg;
    Scenario& s = cfg.scenario;
    detail::Block top(&j, "");

    {
        auto b = top.child("system");
        double fc = s.grid.fc();
        double bw = s.grid.bandwidth();
        int m = s.grid.size();
        int n = s.array.n_elements();
        b.positive("fc_hz", fc);
        b.positive("bandwidth_hz", bw);
        b.integer("n_subcarriers", m, 1);
        b.integer("n_symbols", s.n_symbols, 1);
        b.integer("n_elements", n, 2);
        double spacing = 0.5 * wavelength(fc);
        b.positive("element_spacing_m", spacing);
        b.nonnegative("cp_fraction", s.cp_fraction);
        b.nonnegative("noise_power", s.channel.noise_power);
        b.nonnegative("tx_power", s.tx_power);
        b.positive("comm_noise_power", s.comm_noise_power);
        b.finish();
        if (!(fc > 0.5 * bw))
            throw ConfigError("config: 'system.bandwidth_hz' must be below twice the carrier");
        s.grid = FrequencyGrid(fc, bw, m);
        s.array = ArrayConfig(n, spacing);
    }
    {
        auto b = top.child("channel");
        b.number("rician_k_db", s.channel.rician_k_db);
        if (!(s.channel.rician_k_db >= 0.0))
            throw ConfigError("config: 'channel.rician_k_db' must be >= 0");
        b.integer("n_scatterers", s.channel.n_scatterers, 0);
        b.nonnegative("phase_noise_deg", s.channel.phase_noise_deg);
        b.finish();
    }
    {
        auto b = top.child("roi");
        double th_lo = rad2deg(s.roi.theta_min_rad), th_hi = rad2deg(s.roi.theta_max_rad);
        double th_step = rad2deg(s.roi.theta_step_rad);
        b.number("theta_min_deg", th_lo);
        b.number("theta_max_deg", th_hi);
        b.positive("theta_step_deg", th_step);
        b.positive("r_min_m", s.roi.r_min_m);
        b.positive("r_max_m", s.roi.r_max_m);
        b.positive("r_step_m", s.roi.r_step_m);
        b.finish();
        if (!(th_lo > -90.0 && th_hi < 90.0 && th_lo <= th_hi))
            throw ConfigError("config: 'roi' angles must satisfy -90 < theta_min_deg <= theta_max_deg < 90");
        if (!(s.roi.r_min_m <= s.roi.r_max_m))
            throw ConfigError("config: 'roi.r_max_m' must be >= roi.r_min_m");
        s.roi.theta_min_rad = deg2rad(th_lo);
        s.roi.theta_max_rad = deg2rad(th_hi);
        s.roi.theta_step_rad = deg2rad(th_step);
    }
    {
        auto b = top.child("codebook");
        auto& c = s.codebook;
        b.parsed("method", [&](const std::string& v) { c.method = method_from_string(v); });
        b.integer("size", c.size, 1);
        b.integer("nf_distances", c.nf_distances, 2);
        b.integer("broadening_q", c.broadening_q, 1);
        b.integer("design_subcarriers", c.design_subcarriers, 1);
        {
            auto p = b.child("pgd");
            p.positive("step_size", c.pgd.step_size);
            p.nonnegative("beta0", c.pgd.beta0);
            p.positive("beta_growth", c.pgd.beta_growth);
            p.integer("beta_epoch", c.pgd.beta_epoch, 1);
            p.integer("max_iters", c.pgd.max_iters, 0);
            p.positive("rel_tol", c.pgd.rel_tol);
            p.positive("backtracking", c.pgd.backtracking);
            p.finish();
        }
        {
            auto t = b.child("ttd");
            t.parsed("mode", [&](const std::string& v) { c.ttd.mode = ttd_mode_from_string(v); });
            t.integer("n_units", c.ttd.n_units, 1);
            t.positive("resolution_s", c.ttd.resolution_s);
            t.finish();
        }
        b.finish();
    }
    {
        auto b = top.child("combiner");
        b.parsed("method", [&](const std::string& v) { s.combiner.method = combiner_from_string(v); });
        b.number("mu", s.combiner.mu);
        b.integer("guard_bins", s.combiner.guard_bins, 0);
        b.integer("crb_iters", s.combiner.crb_iters, 0);
        b.finish();
        if (!(s.combiner.mu >= 0.0 && s.combiner.mu <= 1.0))
            throw ConfigError("config: 'combiner.mu' must lie in [0, 1]");
    }
    {
        auto b = top.child("detection");
        b.positive("pfa_target", s.detection.pfa_target);
        b.integer("gate_bins", s.detection.gate_bins, 0);
        b.integer("calibration_trials", s.detection.calibration_trials, 1);
        b.integer("padding", s.detection.padding, 1);
        b.finish();
        if (!(s.detection.pfa_target < 1.0))
            throw ConfigError("config: 'detection.pfa_target' must be < 1");
    }
    {
        auto b = top.child("montecarlo");
        b.integer("trials", s.trials, 1);
        b.seed("seed", s.seed);
        b.nonnegative("velocity_max_mps", s.velocity_max_mps);
        b.finish();
    }
    {
        auto b = top.child("sweep");
        if (const auto* sizes = b.raw("sizes")) {
            if (!sizes->is_array() || sizes->empty())
                throw ConfigError("config: 'sweep.sizes' must be a non-empty array");
            cfg.sweep_sizes.clear();
            for (const auto& v : *sizes) {
                if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1000)
                    throw ConfigError("config: 'sweep.sizes' entries must be integers in [1, 1000]");
                cfg.sweep_sizes.push_back(v.get<int>());
            }
        }
        if (const auto* methods = b.raw("methods")) {
            if (!methods->is_array() || methods->empty())
                throw ConfigError("config: 'sweep.methods' must be a non-empty array");
            cfg.sweep_methods.clear();
            for (const auto& v : *methods) {
                try {
                    cfg.sweep_methods.push_back(method_from_string(v.is_string() ? v.get<std::string>() : ""));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("config: 'sweep.methods': ") + e.what());
                }
            }
        }
        b.finish();
    }
    {
        auto b = top.child("combiners");
        if (const auto* methods = b.raw("methods")) {
            if (!methods->is_array() || methods->empty())
                throw ConfigError("config: 'combiners.methods' must be a non-empty array");
            cfg.combiner_methods.clear();
            for (const auto& v : *methods) {
                try {
                    cfg.combiner_methods.push_back(combiner_from_string(v.is_string() ? v.get<std::string>() : ""));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("config: 'combiners.methods': ") + e.what());
                }
            }
        }
        b.integer("n_locations", cfg.combiner_locations, 1);
        b.finish();
    }
    {
        auto b = top.child("e2e");
        b.integer("n_users", s.n_users, 0);
        b.finish();
    }
    {
        auto b = top.child("output");
        b.string("dir", cfg.output_dir);
        b.finish();
    }
    top.finish();

    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline RunConfig parse_config_text(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

inline RunConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Fully resolved configuration in the input schema.
inline nlohmann::json to_json(const RunConfig& cfg)
{
    const Scenario& s = cfg.scenario;
    nlohmann::json j;
    j["system"] = {{"fc_hz", s.grid.fc()},
                   {"bandwidth_hz", s.grid.bandwidth()},
                   {"n_subcarriers", s.grid.size()},
                   {"n_symbols", s.n_symbols},
                   {"n_elements", s.array.n_elements()},
                   {"element_spacing_m", s.array.spacing_m()},
                   {"cp_fraction", s.cp_fraction},
                   {"noise_power", s.channel.noise_power},
                   {"tx_power", s.tx_power},
                   {"comm_noise_power", s.comm_noise_power}};
    j["channel"] = {{"rician_k_db", s.channel.rician_k_db},
                    {"n_scatterers", s.channel.n_scatterers},
                    {"phase_noise_deg", s.channel.phase_noise_deg}};
    j["roi"] = {{"theta_min_deg", rad2deg(s.roi.theta_min_rad)},
                {"theta_max_deg", rad2deg(s.roi.theta_max_rad)},
                {"theta_step_deg", rad2deg(s.roi.theta_step_rad)},
                {"r_min_m", s.roi.r_min_m},
                {"r_max_m", s.roi.r_max_m},
                {"r_step_m", s.roi.r_step_m}};
    const auto& c = s.codebook;
    j["codebook"] = {{"method", std::string(to_string(c.method))},
                     {"size", c.size},
                     {"nf_distances", c.nf_distances},
                     {"broadening_q", c.broadening_q},
                     {"design_subcarriers", c.design_subcarriers},
                     {"pgd",
                      {{"step_size", c.pgd.step_size},
                       {"beta0", c.pgd.beta0},
                       {"beta_growth", c.pgd.beta_growth},
                       {"beta_epoch", c.pgd.beta_epoch},
                       {"max_iters", c.pgd.max_iters},
                       {"rel_tol", c.pgd.rel_tol},
                       {"backtracking", c.pgd.backtracking}}},
                     {"ttd",
                      {{"mode", std::string(to_string(c.ttd.mode))},
                       {"n_units", c.ttd.n_units},
                       {"resolution_s", c.ttd.resolution_s}}}};
    j["combiner"] = {{"method", std::string(to_string(s.combiner.method))},
                     {"mu", s.combiner.mu},
                     {"guard_bins", s.combiner.guard_bins},
                     {"crb_iters", s.combiner.crb_iters}};
    j["detection"] = {{"pfa_target", s.detection.pfa_target},
                      {"gate_bins", s.detection.gate_bins},
                      {"calibration_trials", s.detection.calibration_trials},
                      {"padding", s.detection.padding}};
    j["montecarlo"] = {{"trials", s.trials}, {"seed", s.seed}, {"velocity_max_mps", s.velocity_max_mps}};
    j["sweep"]["sizes"] = cfg.sweep_sizes;
    j["sweep"]["methods"] = nlohmann::json::array();
    for (Method m : cfg.sweep_methods)
        j["sweep"]["methods"].push_back(std::string(to_string(m)));
    j["combiners"]["methods"] = nlohmann::json::array();
    for (CombinerMethod m : cfg.combiner_methods)
        j["combiners"]["methods"].push_back(std::string(to_string(m)));
    j["combiners"]["n_locations"] = cfg.combiner_locations;
    j["e2e"] = {{"n_users", s.n_users}};
    j["output"] = {{"dir", cfg.output_dir}};
    return j;
}

} // namespace nfisac
