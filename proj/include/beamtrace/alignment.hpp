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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "beamtrace/codebooks.hpp"
#include "beamtrace/estimators.hpp"

namespace beamtrace {

/// A (tx, rx) beam pair. Level 0 means an index into the flat DFT codebook;
/// a positive level refers to a wide beam of that level in the hierarchical
/// codebook.
struct BeamPair
{
    std::size_t tx = 0;
    std::size_t rx = 0;
    int tx_level = 0;
    int rx_level = 0;

    bool is_wide() const { return tx_level != 0 || rx_level != 0; }
    bool operator==(const BeamPair &) const = default;
};

enum class Algorithm
{
    Esba,
    Hsba,
    Bim,
    Mabel,
    Loren,
};

std::string_view to_string(Algorithm a);
/// Throws std::invalid_argument on unknown names.
Algorithm parse_algorithm(std::string_view name);
const std::vector<Algorithm> &all_algorithms();

struct Schedule
{
    std::vector<BeamPair> entries;
    Algorithm source = Algorithm::Esba;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

/// Returns the measured RSS (dBm) of a pair; noise, if any, is embedded.
using MeasureFn = std::function<double(const BeamPair &)>;

struct AlgorithmConfig
{
    std::size_t budget = 10;       // B: pairs measured by select_best
    std::size_t bim_neighbors = 5; // K
    ErrorModel err;
};

Schedule esba_schedule(std::size_t mt, std::size_t mr);

struct HsbaResult
{
    Schedule schedule;             // every measured pair, in order
    std::vector<double> measured;  // measured RSS per schedule entry
    BeamPair final_pair;           // leaf pair, DFT indices
};

/// Bisection search: joint 2x2 levels while both sides have levels left,
/// then 2-pair BS-only levels with the UE leaf fixed. Ties pick the lowest
/// child. Requires bs.antennas() >= ue.antennas().
HsbaResult hsba_run(const MeasureFn &measure, const HierCodebook &bs_hier, const HierCodebook &ue_hier);

/// Number of measurements hsba_run makes for the given array sizes.
std::size_t hsba_length(std::size_t nt, std::size_t nr);

/// Best pair (argmax, lexicographic ties) of the K nearest records in
/// ascending distance order, duplicates removed.
Schedule bim_schedule(const TrainingSet &d, const Point2 &query, std::size_t k);

/// All pairs sorted by predicted RSS, descending; ties lexicographic.
Schedule rank_pairs(const RssMatrix &predicted, Algorithm source);

Schedule mabel_schedule(const TrainingSet &d, const Point2 &query);
Schedule loren_schedule(const TrainingSet &d, const Point2 &query, const PriorModel &prior, const ErrorModel &err);
Schedule loren_schedule(const LorenEstimator &estimator, const Point2 &query);

/// Lexicographic argmax of an RSS matrix.
BeamPair best_pair(const RssMatrix &rss);

struct Selection
{
    BeamPair pair;
    double measured_rss = 0.0;
    std::size_t position = 0; // index in the schedule
};

/// Measures the first min(B, length) entries and keeps the strongest
/// (earliest on ties).
Selection select_best(const Schedule &schedule, const MeasureFn &measure, std::size_t budget);

} // namespace beamtrace
