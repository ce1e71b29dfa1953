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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>

#include "beamtrace/estimators.hpp"

namespace beamtrace {

/// Malformed or inconsistent CSV input. `row` is the 1-based line number
/// (the header is line 1), or 0 when the whole file is at fault.
class DatasetError : public std::runtime_error
{
  public:
    DatasetError(std::size_t row, const std::string &what);
    std::size_t row() const { return row_; }

  private:
    std::size_t row_;
};

/// Header plus one row per record; loc_id is the record index unless
/// `loc_ids` supplies one per record.
void write_dataset(std::ostream &out, const TrainingSet &d, std::span<const std::size_t> loc_ids = {});
void save_dataset(const TrainingSet &d, const std::filesystem::path &path, std::span<const std::size_t> loc_ids = {});

TrainingSet read_dataset(std::istream &in);
TrainingSet load_dataset(const std::filesystem::path &path);

/// Splits one CSV line on commas (no quoting). Trailing CR is dropped.
std::vector<std::string> split_csv_line(const std::string &line);

/// Strict full-string number parse; nullopt on any trailing garbage.
std::optional<double> parse_double(const std::string &text);

} // namespace beamtrace
