// SPDX-License-Identifier: Apache-2.0
//
// beamtrace: location-aware mmWave beam alignment toolkit
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

#include "beamtrace/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beamtrace/dataset_io.hpp"
#include "beamtrace/evaluation.hpp"
#include "beamtrace/report.hpp"
#include "beamtrace/scenario.hpp"

namespace beamtrace {

namespace {

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

int scenario_exit_code(ScenarioErrorKind kind)
{
    switch (kind)
    {
    case ScenarioErrorKind::MissingFile:
        return kExitMissingFile;
    case ScenarioErrorKind::Syntax:
        return kExitSyntax;
    case ScenarioErrorKind::Schema:
        return kExitSchema;
    case ScenarioErrorKind::Constraint:
        return kExitConstraint;
    }
    return kExitFailure;
}

std::vector<double> parse_values(const std::string &list)
{
    std::vector<double> values;
    for (const auto &field : split_csv_line(list))
    {
        const auto v = parse_double(field);
        if (!v || !std::isfinite(*v))
            throw UsageError("--values: '" + field + "' is not a number");
        values.push_back(*v);
    }
    return values;
}

CampaignConfig load_config(const std::optional<std::string> &path, const std::optional<std::uint64_t> &seed)
{
    CampaignConfig cfg = path ? parse_scenario(*path) : CampaignConfig{};
    if (seed)
        cfg.master_seed = *seed;
    return cfg;
}

std::string one_line(std::string s)
{
    for (char &c : s)
        if (c == '\n' || c == '\r')
            c = ' ';
    return s;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Location-aware mmWave beam alignment experiments", "beamtrace"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;

    auto *scene_gen = app.add_subcommand("scene-gen", "Write a scenario with randomly placed buildings");
    std::size_t n_obstacles = 8;
    scene_gen->add_option("--out", out_path, "Scenario file to write")->required();
    scene_gen->add_option("--seed", seed, "Seed for obstacle placement and the campaign");
    scene_gen->add_option("--obstacles", n_obstacles, "Number of buildings")->capture_default_str();
    scene_gen->add_option("--config", config_path, "Base scenario whose region, BS and campaign are kept");

    auto *dataset_build = app.add_subcommand("dataset-build", "Sample a training dataset from a scenario");
    dataset_build->add_option("--config", config_path, "Scenario file")->required();
    dataset_build->add_option("--seed", seed, "Overrides campaign.master_seed");
    dataset_build->add_option("--out", out_path, "Dataset CSV to write")->required();

    auto *run = app.add_subcommand("run", "Run one campaign and write report files");
    run->add_option("--config", config_path, "Scenario file")->required();
    run->add_option("--seed", seed, "Overrides campaign.master_seed");
    run->add_option("--out", out_path, "Output directory")->required();

    auto *sweep = app.add_subcommand("sweep", "Run a campaign per parameter value");
    std::string param_name, values_text;
    bool match = false;
    sweep->add_option("--config", config_path, "Scenario file (defaults apply when omitted)");
    sweep->add_option("--seed", seed, "Overrides campaign.master_seed");
    sweep->add_option("--param", param_name,
                      "sigma_test, sigma_train, assumed_sigma_test, assumed_sigma_train, num_train or nt")
        ->required();
    sweep->add_option("--values", values_text, "Comma-separated values")->required();
    sweep->add_flag("--match", match, "Set the assumed error level equal to the swept true level");
    sweep->add_option("--out", out_path, "Output directory")->required();

    auto *report = app.add_subcommand("report", "Re-render SVG charts from report CSV files");
    report->add_option("--dir", out_path, "Directory holding bmbpsf.csv / nmbp.csv")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError &e)
    {
        out << app.help();
        err << "beamtrace: " << one_line(e.what()) << '\n';
        return kExitUsage;
    }

    try
    {
        if (scene_gen->parsed())
        {
            CampaignConfig cfg = load_config(config_path, seed);
            cfg.scene = random_scene(seed.value_or(cfg.master_seed), n_obstacles, cfg.scene);
            validate_config(cfg);
            write_scenario(cfg, out_path);
        }
        else if (dataset_build->parsed())
        {
            const CampaignConfig cfg = load_config(config_path, seed);
            const ChannelAtlas atlas = make_atlas(cfg);
            Rng rng(derive_seed(cfg.master_seed, {0, 1}));
            const auto sampled = build_training_set(atlas, cfg.num_train, cfg.sigma_train, cfg.meas_noise_var, rng);
            save_dataset(sampled.set, out_path, sampled.grid_indices);
        }
        else if (run->parsed())
        {
            const CampaignConfig cfg = load_config(config_path, seed);
            std::vector<SweepRow> rows;
            rows.push_back({0.0, run_campaign(cfg)});
            write_report(out_path, "none", rows);
        }
        else if (sweep->parsed())
        {
            SweepParam param;
            try
            {
                param = parse_sweep_param(param_name);
            }
            catch (const std::invalid_argument &e)
            {
                throw UsageError(std::string("--param: ") + e.what());
            }
            const auto values = parse_values(values_text);
            const CampaignConfig cfg = load_config(config_path, seed);
            write_report(out_path, to_string(param), run_sweep(cfg, param, values, match));
        }
        else if (report->parsed())
        {
            render_reports(out_path);
        }
    }
    catch (const UsageError &e)
    {
        out << app.help();
        err << "beamtrace: " << one_line(e.what()) << '\n';
        return kExitUsage;
    }
    catch (const ScenarioError &e)
    {
        err << "beamtrace: scenario error: " << one_line(e.what()) << '\n';
        return scenario_exit_code(e.kind());
    }
    catch (const DatasetError &e)
    {
        err << "beamtrace: data error: " << one_line(e.what()) << '\n';
        return kExitBadData;
    }
    catch (const std::exception &e)
    {
        err << "beamtrace: " << one_line(e.what()) << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace beamtrace
