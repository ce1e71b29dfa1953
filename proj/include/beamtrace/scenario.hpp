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

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "beamtrace/evaluation.hpp"

namespace beamtrace {

enum class ScenarioErrorKind
{
    MissingFile,
    Syntax,
    Schema,
    Constraint,
};

/// Raised by the scenario loader. `where` is a JSON path such as
/// "scene.obstacles[2]" or "line 4".
class ScenarioError : public std::runtime_error
{
  public:
    ScenarioError(ScenarioErrorKind kind, std::string where, const std::string &what);

    ScenarioErrorKind kind() const { return kind_; }
    const std::string &where() const { return where_; }

  private:
    ScenarioErrorKind kind_;
    std::string where_;
};

/// Parses and validates a scenario document. Only "scene.bs" is required;
/// everything else falls back to the CampaignConfig defaults, with an empty
/// obstacle list.
CampaignConfig parse_scenario_text(std::string_view text);
CampaignConfig parse_scenario(const std::filesystem::path &path);

/// Complete scenario document (every key written), pretty-printed.
std::string serialize_scenario(const CampaignConfig &config);
void write_scenario(const CampaignConfig &config, const std::filesystem::path &path);

} // namespace beamtrace
