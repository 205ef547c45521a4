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

// nfisac <gen-codebook|map|sense|sweep|combiners|e2e> --config <path> --out <dir>
//        [--sizes lo:hi:step] [--seed u64] [--codebook <file>]

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nfisac/nfisac.hpp"

namespace fs = std::filesystem;
using namespace nfisac;

namespace {

std::vector<int> parse_sizes(const std::string& spec)
{
    int lo = 0, hi = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> lo >> c1 >> hi) || c1 != ':')
        throw std::invalid_argument("--sizes: expected lo:hi[:step], got '" + spec + "'");
    if (in >> c2) {
        if (c2 != ':' || !(in >> step))
            throw std::invalid_argument("--sizes: expected lo:hi[:step], got '" + spec + "'");
    }
    std::string rest;
    if (in >> rest)
        throw std::invalid_argument("--sizes: trailing characters in '" + spec + "'");
    if (lo < 1 || hi > 1000 || lo > hi || step < 1)
        throw std::invalid_argument("--sizes: need 1 <= lo <= hi <= 1000 and step >= 1");
    std::vector<int> sizes;
    for (int s = lo; s <= hi; s += step)
        sizes.push_back(s);
    return sizes;
}

Codebook load_codebook(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open codebook '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("codebook '" + path + "': " + e.what());
    }
    return codebook_from_json(j);
}

struct Options {
    std::string command;
    std::string config;
    std::string out;
    std::string sizes;
    std::optional<std::uint64_t> seed;
    std::string codebook;
};

void run(const Options& opt)
{
    RunConfig cfg = parse_config_file(opt.config);
    if (opt.seed)
        cfg.scenario.seed = *opt.seed;
    if (!opt.sizes.empty())
        cfg.sweep_sizes = parse_sizes(opt.sizes);
    std::optional<Codebook> given;
    if (!opt.codebook.empty()) {
        given = load_codebook(opt.codebook);
        if (given->n_elements() != cfg.scenario.array.n_elements())
            throw std::invalid_argument("codebook element count does not match system.n_elements");
    }
    const Scenario& s = cfg.scenario;
    const fs::path dir = opt.out.empty() ? fs::path(cfg.output_dir) : fs::path(opt.out);

    // Everything is validated above; only now touch the file system.
    fs::create_directories(dir);
    write_json_file(dir / "config.json", to_json(cfg));
    const Codebook cb = given ? *given : build_codebook(s);

    if (opt.command == "gen-codebook") {
        write_json_file(dir / "codebook.json", to_json(cb));
    } else if (opt.command == "map") {
        const CoverageMap cov = coverage_map(cb, s.array, s.grid, s.roi);
        write_report(dir, "coverage", coverage_table(cov), coverage_json(cov));
    } else if (opt.command == "sense") {
        const std::string label = std::string(to_string(cb.method));
        const SensingSystem sys = prepare_system(s, cb, s.combiner);
        const auto trials = run_trials(s, sys);
        write_report(dir, "metrics", metrics_table({detection_metrics(trials, label, cb.size())}),
                     metrics_json({detection_metrics(trials, label, cb.size())}));
        const int c = trials.front().best_codeword >= 0 ? trials.front().best_codeword : 0;
        const DelayDopplerMap map = trial_map(s, sys, trials.front().truth, 0, c);
        write_report(dir, "rd_map", map_table(map), map_json(map));
    } else if (opt.command == "sweep") {
        const auto reports = size_sweep(s, cfg.sweep_sizes, cfg.sweep_methods);
        write_report(dir, "sweep", metrics_table(reports), metrics_json(reports));
    } else if (opt.command == "combiners") {
        std::vector<CombinerCase> cases;
        for (CombinerMethod m : cfg.combiner_methods) {
            CombinerSpec spec = s.combiner;
            spec.method = m;
            cases.push_back({std::string(to_string(m)), spec, std::nullopt});
        }
        Scenario ref = s;
        ref.codebook.ttd.mode = TtdMode::ideal_full;
        CombinerSpec mrc = s.combiner;
        mrc.method = CombinerMethod::mrc;
        cases.push_back({"ttd_ideal+mrc", mrc, build_codebook(ref, Method::ttd, cb.size())});
        const auto reports = combiner_comparison(s, cb, cases, cfg.combiner_locations);
        write_report(dir, "combiners", metrics_table(reports), metrics_json(reports));
    } else if (opt.command == "e2e") {
        const SensingSystem sys = prepare_system(s, cb, s.combiner);
        const auto rows = e2e_throughput(s, sys, user_grid(s.roi, s.n_users));
        write_report(dir, "e2e", e2e_table(rows), e2e_json(rows));
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Near-field wideband ISAC beamforming experiments"};
    app.require_subcommand(1, 1);
    Options opt;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"gen-codebook", "emit codebook JSON"},
        {"map", "emit the codebook coverage map"},
        {"sense", "Monte Carlo detection metrics for the configured codebook"},
        {"sweep", "detection metrics versus codebook size"},
        {"combiners", "detection metrics per run-time combiner"},
        {"e2e", "sensing-aided link throughput per user"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--seed", opt.seed, "master seed override");
        if (name == "sweep")
            sub->add_option("--sizes", opt.sizes, "codebook sizes lo:hi:step");
        if (name != "gen-codebook")
            sub->add_option("--codebook", opt.codebook, "codebook JSON to use instead of building one")
                ->check(CLI::ExistingFile);
        sub->callback([&opt, name = name] { opt.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << "nfisac: " << e.what() << "\n";
        return 2;
    }
    try {
        run(opt);
    } catch (const std::exception& e) {
        std::cerr << "nfisac: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
