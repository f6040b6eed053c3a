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

#ifndef RVQLAB_HARNESS_HPP
#define RVQLAB_HARNESS_HPP

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rvqlab
{
    inline constexpr const char *version_string = "0.1.0";

    const std::vector<std::string> &preset_names();

    struct Trials
    {
        std::size_t channels = 200;
        std::size_t codebooks = 100;
        std::size_t samples = 100000;
        std::size_t optimizer_channels = 100;
        std::size_t optimizer_budget = 1000;
    };

    struct ExperimentConfig
    {
        std::string experiment = "custom";
        nlohmann::json model; // custom experiments only
        std::string quantity = "delta1"; // custom: delta1 | delta2
        std::vector<unsigned> bits;
        double rho = 1.0;
        std::vector<double> rho_db; // fig5b sweep
        std::vector<double> alphas;
        std::vector<double> betas;
        Trials trials;
        std::uint64_t seed = 1;
        unsigned threads = 1;
        std::string output_dir = "out";
    };

    // Defaults for a preset name; ConfigError for unknown names
    ExperimentConfig preset_config(const std::string &name);

    // Preset defaults overridden by the fields present in doc. ConfigError names the field.
    ExperimentConfig parse_config(const nlohmann::json &doc);
    ExperimentConfig load_config(const std::filesystem::path &path);

    struct ConfigIssue
    {
        std::string field; // JSON path such as trials.codebooks or bits[2]
        std::string message;
    };

    // Every problem found without running; empty when the document is runnable
    std::vector<ConfigIssue> validate_config(const nlohmann::json &doc);
    std::vector<ConfigIssue> validate_config(const ExperimentConfig &config);

    // Fields that determine the outputs, in canonical form
    nlohmann::json config_to_json(const ExperimentConfig &config);
    std::string config_hash(const ExperimentConfig &config);

    struct CsvTable
    {
        std::string name; // file stem
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;
    };

    std::string format_real(double v); // 17 significant digits
    std::string render_csv(const CsvTable &table, const std::string &manifest_name);

    struct PresetOutput
    {
        std::vector<CsvTable> tables;
        std::optional<nlohmann::json> skews; // optimized skewing matrices, fig6 presets
    };

    // Pure computation of a preset; no filesystem access
    PresetOutput compute_preset(const ExperimentConfig &config);

    struct RunResult
    {
        std::vector<std::filesystem::path> outputs;
        std::filesystem::path manifest;
        double wall_seconds = 0.0;
    };

    // Writes the tables and manifest.json into config.output_dir. The manifest is written first with
    // complete = false and rewritten with complete = true once every table is on disk.
    RunResult run_experiment(const ExperimentConfig &config);
}

#endif
