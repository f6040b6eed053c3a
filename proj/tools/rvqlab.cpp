// SPDX-License-Identifier: Apache-2.0
//
// rvqlab: limited-feedback beamforming loss analysis for RVQ codebooks
// Copyright (C) 2026 rvqlab contributors
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

#include "rvqlab/errors.hpp"
#include "rvqlab/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace
{
    nlohmann::json read_json(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw rvqlab::ConfigError("$", "cannot open " + path);
        try
        {
            return nlohmann::json::parse(f);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw rvqlab::ConfigError("$", std::string("malformed JSON: ") + e.what());
        }
    }

    void report(const rvqlab::RunResult &r)
    {
        for (const auto &p : r.outputs)
            std::cout << "wrote " << p.string() << "\n";
        std::cout << "manifest " << r.manifest.string() << " (" << r.wall_seconds << " s)\n";
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"rvqlab: RVQ limited-feedback loss analysis"};
    app.require_subcommand(1);

    std::string config_path, out_dir, preset;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    auto *run = app.add_subcommand("run", "run an experiment described by a JSON config");
    run->add_option("--config", config_path, "config file")->required();
    auto *run_seed = run->add_option("--seed", seed, "master seed (overrides the config)");
    auto *run_threads = run->add_option("--threads", threads, "worker threads, 0 = all cores");
    auto *run_out = run->add_option("--out", out_dir, "output directory");

    auto *validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", config_path, "config file")->required();

    auto *figure = app.add_subcommand("figure", "run a figure preset with its default settings");
    figure->add_option("preset", preset, "fig1 ... fig6d")->required();
    auto *fig_seed = figure->add_option("--seed", seed, "master seed");
    auto *fig_threads = figure->add_option("--threads", threads, "worker threads, 0 = all cores");
    auto *fig_out = figure->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*validate)
        {
            const auto issues = rvqlab::validate_config(read_json(config_path));
            for (const auto &i : issues)
                std::cout << i.field << ": " << i.message << "\n";
            if (issues.empty())
                std::cout << "ok\n";
            return issues.empty() ? 0 : 1;
        }

        rvqlab::ExperimentConfig cfg;
        if (*run)
            cfg = rvqlab::parse_config(read_json(config_path));
        else
        {
            cfg = rvqlab::preset_config(preset);
            if (preset == "custom")
                throw rvqlab::ConfigError("preset", "custom needs a config file; use run --config");
            cfg.output_dir = "out/" + preset;
        }
        if ((*run && *run_seed) || (*figure && *fig_seed))
            cfg.seed = seed;
        if ((*run && *run_threads) || (*figure && *fig_threads))
            cfg.threads = threads;
        if ((*run && *run_out) || (*figure && *fig_out))
            cfg.output_dir = out_dir;
        report(rvqlab::run_experiment(cfg));
        return 0;
    }
    catch (const rvqlab::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
