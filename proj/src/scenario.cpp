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

#include "beamtrace/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace beamtrace {

using nlohmann::json;
using nlohmann::ordered_json;

ScenarioError::ScenarioError(ScenarioErrorKind kind, std::string where, const std::string &what)
    : std::runtime_error(where.empty() ? what : where + ": " + what), kind_(kind), where_(std::move(where))
{
}

namespace {

[[noreturn]] void schema_error(const std::string &where, const std::string &what)
{
    throw ScenarioError(ScenarioErrorKind::Schema, where, what);
}

[[noreturn]] void constraint_error(const std::string &where, const std::string &what)
{
    throw ScenarioError(ScenarioErrorKind::Constraint, where, what);
}

void reject_unknown(const json &obj, const std::string &where, std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object())
        schema_error(where, "expected an object");
    for (const auto &item : obj.items())
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            schema_error(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
}

double number(const json &v, const std::string &where)
{
    if (!v.is_number())
        schema_error(where, "expected a number");
    return v.get<double>();
}

std::uint64_t unsigned_integer(const json &v, const std::string &where)
{
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer())
        schema_error(where, "must be non-negative");
    schema_error(where, "expected an integer");
}

std::vector<double> numbers(const json &v, const std::string &where, std::size_t expected)
{
    if (!v.is_array() || v.size() != expected)
        schema_error(where, "expected an array of " + std::to_string(expected) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Rect rect(const json &v, const std::string &where)
{
    const auto n = numbers(v, where, 4);
    return {n[0], n[1], n[2], n[3]};
}

Point2 point(const json &v, const std::string &where)
{
    const auto n = numbers(v, where, 2);
    return {n[0], n[1]};
}

Scene parse_scene(const json &s)
{
    reject_unknown(s, "scene", {"region", "bs", "bs_array_axis", "obstacles", "reflection_coeff", "carrier_freq_hz"});
    Scene scene;
    scene.obstacles.clear();
    if (!s.contains("bs"))
        schema_error("scene.bs", "required key missing");
    scene.bs_location = point(s["bs"], "scene.bs");
    if (s.contains("region"))
        scene.region = rect(s["region"], "scene.region");
    if (s.contains("bs_array_axis"))
        scene.bs_array_axis = point(s["bs_array_axis"], "scene.bs_array_axis");
    if (s.contains("reflection_coeff"))
    {
        const auto c = numbers(s["reflection_coeff"], "scene.reflection_coeff", 2);
        scene.reflection_coeff = {c[0], c[1]};
    }
    if (s.contains("carrier_freq_hz"))
        scene.carrier_freq_hz = number(s["carrier_freq_hz"], "scene.carrier_freq_hz");
    if (s.contains("obstacles"))
    {
        const json &obs = s["obstacles"];
        if (!obs.is_array())
            schema_error("scene.obstacles", "expected an array");
        for (std::size_t i = 0; i < obs.size(); ++i)
            scene.obstacles.push_back(rect(obs[i], "scene.obstacles[" + std::to_string(i) + "]"));
    }

    if (!scene.region.valid())
        constraint_error("scene.region", "must have positive extent");
    if (!scene.region.contains_closed(scene.bs_location))
        constraint_error("scene.bs", "lies outside the region");
    if (std::abs(scene.bs_array_axis.norm() - 1.0) > 1e-9)
        constraint_error("scene.bs_array_axis", "must be a unit vector");
    if (std::abs(scene.reflection_coeff) > 1.0)
        constraint_error("scene.reflection_coeff", "magnitude exceeds 1");
    if (!(scene.carrier_freq_hz > 0.0))
        constraint_error("scene.carrier_freq_hz", "must be positive");
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i)
    {
        const Rect &r = scene.obstacles[i];
        const std::string where = "scene.obstacles[" + std::to_string(i) + "]";
        if (!r.valid())
            constraint_error(where, "has non-positive extent");
        if (!scene.region.encloses(r))
            constraint_error(where, "lies outside the region");
        if (r.contains_closed(scene.bs_location))
            constraint_error(where, "contains the BS location");
    }
    return scene;
}

void parse_campaign(const json &c, CampaignConfig &cfg)
{
    reject_unknown(c, "campaign",
                   {"grid_spacing_m", "nt", "nr", "ue_orientation_rad", "tx_power_dbm", "num_train", "sigma_train_m",
                    "sigma_test_m", "assumed_sigma_train_m", "assumed_sigma_test_m", "meas_noise_var_db2",
                    "margin_db", "num_trials", "num_test_locations", "master_seed", "algorithms", "budget_b",
                    "bim_neighbors"});
    const auto num = [&](const char *key, double &out) {
        if (c.contains(key))
            out = number(c[key], std::string("campaign.") + key);
    };
    const auto count = [&](const char *key, std::size_t &out) {
        if (c.contains(key))
            out = static_cast<std::size_t>(unsigned_integer(c[key], std::string("campaign.") + key));
    };
    num("grid_spacing_m", cfg.grid_spacing);
    count("nt", cfg.nt);
    count("nr", cfg.nr);
    num("ue_orientation_rad", cfg.ue_orientation);
    num("tx_power_dbm", cfg.tx_power_dbm);
    count("num_train", cfg.num_train);
    num("sigma_train_m", cfg.sigma_train);
    num("sigma_test_m", cfg.sigma_test);
    num("assumed_sigma_train_m", cfg.assumed_sigma_train);
    num("assumed_sigma_test_m", cfg.assumed_sigma_test);
    num("meas_noise_var_db2", cfg.meas_noise_var);
    num("margin_db", cfg.margin_db);
    count("num_trials", cfg.num_trials);
    count("num_test_locations", cfg.num_test_locations);
    if (c.contains("master_seed"))
        cfg.master_seed = unsigned_integer(c["master_seed"], "campaign.master_seed");
    count("budget_b", cfg.budget);
    count("bim_neighbors", cfg.bim_neighbors);
    if (c.contains("algorithms"))
    {
        const json &algs = c["algorithms"];
        if (!algs.is_array())
            schema_error("campaign.algorithms", "expected an array of names");
        cfg.algorithms.clear();
        for (std::size_t i = 0; i < algs.size(); ++i)
        {
            const std::string where = "campaign.algorithms[" + std::to_string(i) + "]";
            if (!algs[i].is_string())
                schema_error(where, "expected a string");
            try
            {
                cfg.algorithms.push_back(parse_algorithm(algs[i].get<std::string>()));
            }
            catch (const std::invalid_argument &e)
            {
                schema_error(where, e.what());
            }
        }
    }
}

// Maps a validate_config field name onto its scenario key.
std::string campaign_path(const std::string &message)
{
    const auto colon = message.find(':');
    if (colon == std::string::npos)
        return "campaign";
    return "campaign." + message.substr(0, colon);
}

std::size_t line_of(std::string_view text, std::size_t byte)
{
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

} // namespace

CampaignConfig parse_scenario_text(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        // byte is 1-based and points just past the offending character.
        const std::size_t at = e.byte == 0 ? 0 : e.byte - 1;
        throw ScenarioError(ScenarioErrorKind::Syntax, "line " + std::to_string(line_of(text, at)),
                            "malformed JSON");
    }

    reject_unknown(doc, "", {"scene", "campaign"});
    if (!doc.contains("scene"))
        schema_error("scene", "required key missing");

    CampaignConfig cfg;
    cfg.scene = parse_scene(doc["scene"]);
    if (doc.contains("campaign"))
        parse_campaign(doc["campaign"], cfg);
    try
    {
        validate_config(cfg);
    }
    catch (const std::invalid_argument &e)
    {
        const std::string msg = e.what();
        const auto colon = msg.find(": ");
        constraint_error(campaign_path(msg), colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
    return cfg;
}

CampaignConfig parse_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ScenarioError(ScenarioErrorKind::MissingFile, path.string(), "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const CampaignConfig &c)
{
    ordered_json scene;
    const Scene &s = c.scene;
    scene["region"] = {s.region.xmin, s.region.ymin, s.region.xmax, s.region.ymax};
    scene["bs"] = {s.bs_location.x(), s.bs_location.y()};
    scene["bs_array_axis"] = {s.bs_array_axis.x(), s.bs_array_axis.y()};
    scene["obstacles"] = ordered_json::array();
    for (const Rect &r : s.obstacles)
        scene["obstacles"].push_back({r.xmin, r.ymin, r.xmax, r.ymax});
    scene["reflection_coeff"] = {s.reflection_coeff.real(), s.reflection_coeff.imag()};
    scene["carrier_freq_hz"] = s.carrier_freq_hz;

    ordered_json camp;
    camp["grid_spacing_m"] = c.grid_spacing;
    camp["nt"] = c.nt;
    camp["nr"] = c.nr;
    camp["ue_orientation_rad"] = c.ue_orientation;
    camp["tx_power_dbm"] = c.tx_power_dbm;
    camp["num_train"] = c.num_train;
    camp["sigma_train_m"] = c.sigma_train;
    camp["sigma_test_m"] = c.sigma_test;
    camp["assumed_sigma_train_m"] = c.assumed_sigma_train;
    camp["assumed_sigma_test_m"] = c.assumed_sigma_test;
    camp["meas_noise_var_db2"] = c.meas_noise_var;
    camp["margin_db"] = c.margin_db;
    camp["num_trials"] = c.num_trials;
    camp["num_test_locations"] = c.num_test_locations;
    camp["master_seed"] = c.master_seed;
    camp["algorithms"] = ordered_json::array();
    for (Algorithm a : c.algorithms)
        camp["algorithms"].push_back(std::string(to_string(a)));
    camp["budget_b"] = c.budget;
    camp["bim_neighbors"] = c.bim_neighbors;

    ordered_json doc;
    doc["scene"] = std::move(scene);
    doc["campaign"] = std::move(camp);
    return doc.dump(2) + "\n";
}

void write_scenario(const CampaignConfig &config, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("Cannot write scenario file '" + path.string() + "'.");
    out << serialize_scenario(config);
    if (!out)
        throw std::runtime_error("Failed while writing '" + path.string() + "'.");
}

} // namespace beamtrace
