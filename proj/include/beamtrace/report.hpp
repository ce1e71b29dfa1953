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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "beamtrace/evaluation.hpp"

namespace beamtrace {

/// A parsed CSV file: header plus rows of raw field text.
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name` in the header; throws DatasetError if absent.
    std::size_t column(std::string_view name) const;
};

/// Reads a comma-separated table. Every row must match the header width.
CsvTable read_csv(std::istream &in);

/// Per-index BMBPSF curves: sweep_param, sweep_value, algorithm, index,
/// mean_dbm, median_dbm. `param` is "none" for a single campaign.
std::string bmbpsf_csv(std::string_view param, const std::vector<SweepRow> &rows);

/// One row per (sweep value, algorithm) with the NMBP statistics.
std::string nmbp_csv(std::string_view param, const std::vector<SweepRow> &rows);

/// Line charts rendered purely from the CSV text. Each point carries the
/// original CSV fields in data-x / data-y attributes.
std::string render_bmbpsf_svg(const CsvTable &table);
std::string render_nmbp_svg(const CsvTable &table);

/// Writes bmbpsf.csv and nmbp.csv into `dir` and renders their SVGs.
void write_report(const std::filesystem::path &dir, std::string_view param, const std::vector<SweepRow> &rows);

/// Re-renders the SVG for every known CSV present in `dir`. Returns the
/// files written.
std::vector<std::filesystem::path> render_reports(const std::filesystem::path &dir);

} // namespace beamtrace
