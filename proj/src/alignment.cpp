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

#include "beamtrace/alignment.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>

namespace beamtrace {

std::string_view to_string(Algorithm a)
{
    switch (a)
    {
    case Algorithm::Esba:
        return "esba";
    case Algorithm::Hsba:
        return "hsba";
    case Algorithm::Bim:
        return "bim";
    case Algorithm::Mabel:
        return "mabel";
    case Algorithm::Loren:
        return "loren";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name)
{
    for (Algorithm a : all_algorithms())
        if (to_string(a) == name)
            return a;
    throw std::invalid_argument("Unknown algorithm '" + std::string(name) + "'.");
}

const std::vector<Algorithm> &all_algorithms()
{
    static const std::vector<Algorithm> all = {Algorithm::Esba, Algorithm::Hsba, Algorithm::Bim, Algorithm::Mabel,
                                               Algorithm::Loren};
    return all;
}

Schedule esba_schedule(std::size_t mt, std::size_t mr)
{
    if (mt == 0 || mr == 0)
        throw std::invalid_argument("Codebooks must be nonempty.");
    Schedule s{{}, Algorithm::Esba};
    s.entries.reserve(mt * mr);
    for (std::size_t m = 0; m < mt; ++m)
        for (std::size_t k = 0; k < mr; ++k)
            s.entries.push_back({m, k});
    return s;
}

namespace {

int log2_exact(std::size_t n)
{
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("Array size " + std::to_string(n) + " is not a power of two.");
    int q = 0;
    while ((std::size_t{1} << static_cast<unsigned>(q)) < n)
        ++q;
    return q;
}

// Converts a hierarchical (level, index) reference into schedule tagging.
std::pair<std::size_t, int> tag(const HierCodebook &hier, int level, std::size_t index)
{
    if (level == hier.depth())
        return {hier.dft_index(index), 0};
    return {index, level};
}

BeamPair make_pair(const HierCodebook &bs, int bs_level, std::size_t bs_index, const HierCodebook &ue, int ue_level,
                   std::size_t ue_index)
{
    const auto [tx, tx_level] = tag(bs, bs_level, bs_index);
    const auto [rx, rx_level] = tag(ue, ue_level, ue_index);
    return {tx, rx, tx_level, rx_level};
}

} // namespace

std::size_t hsba_length(std::size_t nt, std::size_t nr)
{
    const int qt = log2_exact(nt);
    const int qr = log2_exact(nr);
    if (qt < qr)
        throw std::invalid_argument("Hierarchical search expects Nt >= Nr.");
    return static_cast<std::size_t>(4 * qr + 2 * (qt - qr));
}

HsbaResult hsba_run(const MeasureFn &measure, const HierCodebook &bs_hier, const HierCodebook &ue_hier)
{
    const int qt = bs_hier.depth();
    const int qr = ue_hier.depth();
    if (qt == 0 || qr == 0)
        throw std::invalid_argument("Hierarchical codebooks must have at least one level.");
    if (qt < qr)
        throw std::invalid_argument("Hierarchical search expects Nt >= Nr.");

    HsbaResult result;
    result.schedule.source = Algorithm::Hsba;
    std::size_t bs_beam = 0; // parent index; level 0 is the implicit root
    std::size_t ue_beam = 0;

    auto record = [&](const BeamPair &p) {
        const double value = measure(p);
        result.schedule.entries.push_back(p);
        result.measured.push_back(value);
        return value;
    };

    for (int level = 1; level <= qr; ++level)
    {
        const std::array<std::size_t, 2> bs_kids = {2 * bs_beam, 2 * bs_beam + 1};
        const std::array<std::size_t, 2> ue_kids = {2 * ue_beam, 2 * ue_beam + 1};
        double best = 0.0;
        bool first = true;
        std::size_t next_bs = bs_kids[0];
        std::size_t next_ue = ue_kids[0];
        for (std::size_t b : bs_kids)
            for (std::size_t u : ue_kids)
            {
                const double v = record(make_pair(bs_hier, level, b, ue_hier, level, u));
                if (first || v > best)
                {
                    best = v;
                    next_bs = b;
                    next_ue = u;
                    first = false;
                }
            }
        bs_beam = next_bs;
        ue_beam = next_ue;
    }

    for (int level = qr + 1; level <= qt; ++level)
    {
        const std::array<std::size_t, 2> bs_kids = {2 * bs_beam, 2 * bs_beam + 1};
        const double v0 = record(make_pair(bs_hier, level, bs_kids[0], ue_hier, qr, ue_beam));
        const double v1 = record(make_pair(bs_hier, level, bs_kids[1], ue_hier, qr, ue_beam));
        bs_beam = v1 > v0 ? bs_kids[1] : bs_kids[0];
    }

    result.final_pair = {bs_hier.dft_index(bs_beam), ue_hier.dft_index(ue_beam), 0, 0};
    return result;
}

BeamPair best_pair(const RssMatrix &rss)
{
    if (rss.size() == 0)
        throw std::invalid_argument("Empty RSS matrix.");
    BeamPair best{0, 0};
    for (Eigen::Index m = 0; m < rss.rows(); ++m)
        for (Eigen::Index k = 0; k < rss.cols(); ++k)
            if (rss(m, k) > rss(static_cast<Eigen::Index>(best.tx), static_cast<Eigen::Index>(best.rx)))
                best = {static_cast<std::size_t>(m), static_cast<std::size_t>(k)};
    return best;
}

Schedule bim_schedule(const TrainingSet &d, const Point2 &query, std::size_t k)
{
    if (d.empty())
        throw std::invalid_argument("Training set is empty.");
    if (k == 0)
        throw std::invalid_argument("BIM needs at least one neighbor.");

    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> dist(d.size());
    for (std::size_t l = 0; l < d.size(); ++l)
        dist[l] = (d.records[l].est_loc - query).squaredNorm();
    const std::size_t take = std::min(k, d.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });

    Schedule s{{}, Algorithm::Bim};
    for (std::size_t i = 0; i < take; ++i)
    {
        const BeamPair p = best_pair(d.records[order[i]].rss_meas);
        if (std::find(s.entries.begin(), s.entries.end(), p) == s.entries.end())
            s.entries.push_back(p);
    }
    return s;
}

Schedule rank_pairs(const RssMatrix &predicted, Algorithm source)
{
    Schedule s = esba_schedule(static_cast<std::size_t>(predicted.rows()), static_cast<std::size_t>(predicted.cols()));
    s.source = source;
    std::stable_sort(s.entries.begin(), s.entries.end(), [&](const BeamPair &a, const BeamPair &b) {
        return predicted(static_cast<Eigen::Index>(a.tx), static_cast<Eigen::Index>(a.rx)) >
               predicted(static_cast<Eigen::Index>(b.tx), static_cast<Eigen::Index>(b.rx));
    });
    return s;
}

Schedule mabel_schedule(const TrainingSet &d, const Point2 &query)
{
    return rank_pairs(knn1_predict(d, query), Algorithm::Mabel);
}

Schedule loren_schedule(const TrainingSet &d, const Point2 &query, const PriorModel &prior, const ErrorModel &err)
{
    return rank_pairs(loren_predict(d, query, prior, err), Algorithm::Loren);
}

Schedule loren_schedule(const LorenEstimator &estimator, const Point2 &query)
{
    return rank_pairs(estimator.predict(query), Algorithm::Loren);
}

Selection select_best(const Schedule &schedule, const MeasureFn &measure, std::size_t budget)
{
    if (schedule.empty())
        throw std::invalid_argument("Cannot select from an empty schedule.");
    if (budget == 0)
        throw std::invalid_argument("Measurement budget must be at least 1.");
    const std::size_t n = std::min(budget, schedule.size());
    Selection best{schedule.entries[0], measure(schedule.entries[0]), 0};
    for (std::size_t i = 1; i < n; ++i)
    {
        const double v = measure(schedule.entries[i]);
        if (v > best.measured_rss)
            best = {schedule.entries[i], v, i};
    }
    return best;
}

} // namespace beamtrace
