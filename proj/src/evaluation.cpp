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

#include "beamtrace/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "beamtrace/stats.hpp"

namespace beamtrace {

namespace {

// Stream identifiers for derive_seed.
enum : std::uint64_t
{
    kStreamTraining = 1,
    kStreamTestSample = 2,
    kStreamTestPerturb = 3,
    kStreamMeasure = 4,
};

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// First `count` entries of a uniformly shuffled copy of `pool`.
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t count, Rng &rng)
{
    if (count > pool.size())
        throw std::invalid_argument("Cannot sample more items than available.");
    for (std::size_t i = 0; i < count; ++i)
    {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(count);
    return pool;
}

double standard_normal(Rng &rng)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    return nd(rng);
}

std::vector<double> pad_to(std::vector<double> curve, std::size_t length)
{
    if (!curve.empty())
        curve.resize(std::max(length, curve.size()), curve.back());
    return curve;
}

std::size_t curve_length(const CampaignConfig &config, Algorithm a)
{
    const std::size_t pairs = config.nt * config.nr;
    switch (a)
    {
    case Algorithm::Hsba:
        return hsba_length(config.nt, config.nr);
    case Algorithm::Bim:
        return std::min(config.bim_neighbors, config.num_train);
    default:
        return pairs;
    }
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t k : keys)
        h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

Point2 perturb_location(const Point2 &loc, double sigma, Rng &rng)
{
    const double zx = standard_normal(rng);
    const double zy = standard_normal(rng);
    if (sigma == 0.0)
        return loc;
    return loc + sigma * Point2(zx, zy);
}

Scene default_scene()
{
    Scene s;
    s.region = {0.0, 0.0, 150.0, 150.0};
    s.bs_location = {75.0, 5.0};
    s.bs_array_axis = {1.0, 0.0};
    s.obstacles = {
        {33.0, 135.0, 66.0, 150.0},   {49.5, 115.5, 58.5, 135.0}, {88.5, 118.0, 118.5, 131.5},
        {102.5, 114.0, 127.5, 150.0}, {0.0, 77.0, 20.0, 91.0},    {23.0, 12.0, 43.5, 26.5},
        {92.0, 0.0, 120.0, 25.0},
    };
    return s;
}

Scene random_scene(std::uint64_t seed, std::size_t n_obstacles, const Scene &base)
{
    Scene s = base;
    s.obstacles.clear();
    Rng rng(derive_seed(seed, {0x5ce9e}));
    std::uniform_real_distribution<double> side(8.0, 35.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double clearance = 5.0;
    std::size_t attempts = 0;
    while (s.obstacles.size() < n_obstacles)
    {
        if (++attempts > 1000 * (n_obstacles + 1))
            throw std::runtime_error("Could not place the requested number of obstacles.");
        const double w = std::min(side(rng), s.region.width() / 2.0);
        const double h = std::min(side(rng), s.region.height() / 2.0);
        const double x0 = s.region.xmin + unit(rng) * (s.region.width() - w);
        const double y0 = s.region.ymin + unit(rng) * (s.region.height() - h);
        // Snap to a 0.5 m lattice so the scenario file stays readable.
        Rect r{std::round(x0 * 2.0) / 2.0, std::round(y0 * 2.0) / 2.0, 0.0, 0.0};
        r.xmax = std::min(r.xmin + std::round(w * 2.0) / 2.0, s.region.xmax);
        r.ymax = std::min(r.ymin + std::round(h * 2.0) / 2.0, s.region.ymax);
        const Rect grown{r.xmin - clearance, r.ymin - clearance, r.xmax + clearance, r.ymax + clearance};
        if (!r.valid() || grown.contains_closed(s.bs_location))
            continue;
        s.obstacles.push_back(r);
    }
    return s;
}

std::vector<Point2> make_grid(const Scene &scene, double spacing)
{
    if (!(spacing > 0.0))
        throw std::invalid_argument("Grid spacing must be positive.");
    const auto nx = static_cast<std::size_t>(std::floor(scene.region.width() / spacing + 1e-9));
    const auto ny = static_cast<std::size_t>(std::floor(scene.region.height() / spacing + 1e-9));
    std::vector<Point2> grid;
    grid.reserve(nx * ny);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix)
        {
            const Point2 p(scene.region.xmin + (static_cast<double>(ix) + 0.5) * spacing,
                           scene.region.ymin + (static_cast<double>(iy) + 0.5) * spacing);
            if (p == scene.bs_location)
                continue;
            if (std::any_of(scene.obstacles.begin(), scene.obstacles.end(),
                            [&](const Rect &r) { return r.contains_closed(p); }))
                continue;
            // No LOS and no reflection: there is no link to align.
            if (trace_paths(scene, p).empty())
                continue;
            grid.push_back(p);
        }
    return grid;
}

ChannelAtlas::ChannelAtlas(const Scene &scene, double grid_spacing, const ArrayConfig &bs, const ArrayConfig &ue,
                           double tx_power_dbm)
    : locations_(make_grid(scene, grid_spacing)),
      tx_codebook_(dft_codebook(bs.n_elements)),
      rx_codebook_(dft_codebook(ue.n_elements)),
      tx_power_dbm_(tx_power_dbm)
{
    validate_scene(scene);
    const auto is_pow2 = [](std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; };
    if (is_pow2(bs.n_elements) && is_pow2(ue.n_elements))
    {
        tx_hier_ = hierarchical_codebook(bs.n_elements);
        rx_hier_ = hierarchical_codebook(ue.n_elements);
    }
    channels_.reserve(locations_.size());
    rss_.reserve(locations_.size());
    for (const auto &loc : locations_)
    {
        const auto paths = trace_paths(scene, loc, ue.orientation);
        channels_.push_back(synthesize_channel(paths, bs, ue));
        rss_.push_back(rss_matrix(channels_.back(), tx_codebook_, rx_codebook_, tx_power_dbm_));
    }
}

Eigen::VectorXcd ChannelAtlas::tx_vector(const BeamPair &p) const
{
    return p.tx_level == 0 ? tx_codebook_[p.tx] : tx_hier().level(p.tx_level)[p.tx];
}

Eigen::VectorXcd ChannelAtlas::rx_vector(const BeamPair &p) const
{
    return p.rx_level == 0 ? rx_codebook_[p.rx] : rx_hier().level(p.rx_level)[p.rx];
}

double ChannelAtlas::true_rss(std::size_t i, const BeamPair &p) const
{
    if (!p.is_wide())
        return rss_[i](static_cast<Eigen::Index>(p.tx), static_cast<Eigen::Index>(p.rx));
    return beamtrace::rss(channels_[i], tx_vector(p), rx_vector(p), tx_power_dbm_);
}

SampledTrainingSet build_training_set(const ChannelAtlas &atlas, std::size_t num_train, double sigma_train,
                                      double noise_var, Rng &rng, std::span<const std::size_t> candidates)
{
    std::vector<std::size_t> pool;
    if (candidates.empty())
    {
        pool.resize(atlas.size());
        std::iota(pool.begin(), pool.end(), std::size_t{0});
    }
    else
        pool.assign(candidates.begin(), candidates.end());
    if (num_train > pool.size())
        throw std::invalid_argument("Training set size " + std::to_string(num_train) + " exceeds the " +
                                    std::to_string(pool.size()) + " available grid points.");
    if (sigma_train < 0.0 || noise_var < 0.0)
        throw std::invalid_argument("Error parameters must be non-negative.");
    for (std::size_t idx : pool)
        if (idx >= atlas.size())
            throw std::invalid_argument("Candidate grid index out of range.");

    SampledTrainingSet out;
    out.grid_indices = sample_without_replacement(std::move(pool), num_train, rng);

    const double noise_std = std::sqrt(noise_var);
    out.set.records.reserve(num_train);
    for (std::size_t idx : out.grid_indices)
    {
        TrainingRecord rec;
        rec.true_loc = atlas.location(idx);
        rec.est_loc = perturb_location(rec.true_loc, sigma_train, rng);
        rec.rss_meas = atlas.rss(idx);
        for (Eigen::Index m = 0; m < rec.rss_meas.rows(); ++m)
            for (Eigen::Index k = 0; k < rec.rss_meas.cols(); ++k)
            {
                const double z = standard_normal(rng);
                if (noise_std > 0.0)
                    rec.rss_meas(m, k) += noise_std * z;
            }
        out.set.records.push_back(std::move(rec));
    }
    return out;
}

std::vector<double> bmbpsf(const Schedule &order, const std::function<double(const BeamPair &)> &true_rss)
{
    std::vector<double> curve;
    curve.reserve(order.size());
    double best = -std::numeric_limits<double>::infinity();
    for (const auto &p : order.entries)
    {
        best = std::max(best, true_rss(p));
        curve.push_back(best);
    }
    return curve;
}

std::vector<double> bmbpsf(const Schedule &order, const RssMatrix &true_rss)
{
    return bmbpsf(order, [&](const BeamPair &p) {
        if (p.is_wide())
            throw std::invalid_argument("Wide-beam entries need a channel to evaluate.");
        return true_rss(static_cast<Eigen::Index>(p.tx), static_cast<Eigen::Index>(p.rx));
    });
}

NmbpResult nmbp(std::span<const double> curve, double best, double margin)
{
    if (!(margin > 0.0))
        throw std::invalid_argument("NMBP margin must be positive.");
    const double target = best - margin;
    for (std::size_t t = 0; t < curve.size(); ++t)
        if (curve[t] >= target)
            return {t + 1, false};
    return {curve.size(), true};
}

NmbpResult nmbp(const Schedule &order, const RssMatrix &true_rss, double margin)
{
    const auto curve = bmbpsf(order, true_rss);
    return nmbp(curve, true_rss.maxCoeff(), margin);
}

double mean_nearest_neighbor_distance(std::span<const Point2> locs)
{
    if (locs.size() < 2)
        throw std::invalid_argument("Nearest-neighbor distance needs at least two locations.");
    double total = 0.0;
    for (std::size_t i = 0; i < locs.size(); ++i)
    {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < locs.size(); ++j)
            if (j != i)
                best = std::min(best, (locs[i] - locs[j]).squaredNorm());
        total += std::sqrt(best);
    }
    return total / static_cast<double>(locs.size());
}

ArrayConfig CampaignConfig::bs_array() const
{
    return {nt, 0.5, std::atan2(scene.bs_array_axis.y(), scene.bs_array_axis.x())};
}

ArrayConfig CampaignConfig::ue_array() const
{
    return {nr, 0.5, ue_orientation};
}

ErrorModel CampaignConfig::assumed_errors() const
{
    return {assumed_sigma_train, assumed_sigma_test, meas_noise_var};
}

bool CampaignConfig::operator==(const CampaignConfig &o) const
{
    return scene.region == o.scene.region && scene.bs_location == o.scene.bs_location &&
           scene.bs_array_axis == o.scene.bs_array_axis && scene.obstacles == o.scene.obstacles &&
           scene.reflection_coeff == o.scene.reflection_coeff && scene.carrier_freq_hz == o.scene.carrier_freq_hz &&
           grid_spacing == o.grid_spacing && nt == o.nt && nr == o.nr && ue_orientation == o.ue_orientation &&
           tx_power_dbm == o.tx_power_dbm && num_train == o.num_train && sigma_train == o.sigma_train &&
           sigma_test == o.sigma_test && assumed_sigma_train == o.assumed_sigma_train &&
           assumed_sigma_test == o.assumed_sigma_test && meas_noise_var == o.meas_noise_var &&
           margin_db == o.margin_db && num_trials == o.num_trials && num_test_locations == o.num_test_locations &&
           master_seed == o.master_seed && algorithms == o.algorithms && budget == o.budget &&
           bim_neighbors == o.bim_neighbors;
}

namespace {

void validate_fields(const CampaignConfig &c)
{
    auto fail = [](const std::string &field, const std::string &what) {
        throw std::invalid_argument(field + ": " + what);
    };
    validate_scene(c.scene);
    if (!(c.grid_spacing > 0.0))
        fail("grid_spacing_m", "must be positive");
    if (c.nt == 0)
        fail("nt", "must be at least 1");
    if (c.nr == 0)
        fail("nr", "must be at least 1");
    if (c.num_train < 2)
        fail("num_train", "must be at least 2");
    if (c.sigma_train < 0.0)
        fail("sigma_train_m", "must be non-negative");
    if (c.sigma_test < 0.0)
        fail("sigma_test_m", "must be non-negative");
    if (c.assumed_sigma_train < 0.0)
        fail("assumed_sigma_train_m", "must be non-negative");
    if (c.assumed_sigma_test < 0.0)
        fail("assumed_sigma_test_m", "must be non-negative");
    if (c.meas_noise_var < 0.0)
        fail("meas_noise_var_db2", "must be non-negative");
    if (!(c.margin_db > 0.0))
        fail("margin_db", "must be positive");
    if (c.num_trials == 0)
        fail("num_trials", "must be at least 1");
    if (c.num_test_locations == 0)
        fail("num_test_locations", "must be at least 1");
    if (c.budget == 0)
        fail("budget", "must be at least 1");
    if (c.bim_neighbors == 0)
        fail("bim_neighbors", "must be at least 1");
    if (c.algorithms.empty())
        fail("algorithms", "must list at least one algorithm");
    for (std::size_t i = 0; i < c.algorithms.size(); ++i)
        for (std::size_t j = i + 1; j < c.algorithms.size(); ++j)
            if (c.algorithms[i] == c.algorithms[j])
                fail("algorithms", "duplicate entry '" + std::string(to_string(c.algorithms[i])) + "'");
    if (std::find(c.algorithms.begin(), c.algorithms.end(), Algorithm::Hsba) != c.algorithms.end())
    {
        const auto pow2 = [](std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; };
        if (!pow2(c.nt) || !pow2(c.nr) || c.nt < c.nr)
            fail("algorithms", "hsba needs power-of-two arrays with nt >= nr >= 2");
    }
}

void check_grid_size(const CampaignConfig &c, std::size_t grid)
{
    if (c.num_train > grid)
        throw std::invalid_argument("num_train: exceeds the " + std::to_string(grid) + " available grid points");
    if (c.num_train + c.num_test_locations > grid)
        throw std::invalid_argument("num_test_locations: not enough grid points left after drawing the training set");
}

void validate_against(const CampaignConfig &c, const ChannelAtlas &atlas)
{
    validate_fields(c);
    if (atlas.tx_codebook().size() != c.nt || atlas.rx_codebook().size() != c.nr ||
        atlas.tx_power_dbm() != c.tx_power_dbm)
        throw std::invalid_argument("Channel atlas does not match the configuration.");
    check_grid_size(c, atlas.size());
}

} // namespace

void validate_config(const CampaignConfig &c)
{
    validate_fields(c);
    check_grid_size(c, make_grid(c.scene, c.grid_spacing).size());
}

const AlgorithmTrial &TrialResult::at(Algorithm a) const
{
    for (const auto &t : algorithms)
        if (t.algorithm == a)
            return t;
    throw std::out_of_range("Algorithm '" + std::string(to_string(a)) + "' was not run.");
}

ChannelAtlas make_atlas(const CampaignConfig &config)
{
    return ChannelAtlas(config.scene, config.grid_spacing, config.bs_array(), config.ue_array(), config.tx_power_dbm);
}

TrialResult run_trial(const CampaignConfig &config, const ChannelAtlas &atlas, std::size_t trial_index)
{
    validate_against(config, atlas);
    const std::uint64_t seed = config.master_seed;

    // Test points are drawn first and D comes from the rest. The joint law is
    // the same as drawing D first, but the test set (and its perturbations)
    // no longer depends on L, so sweeps share their test locations.
    std::vector<std::size_t> all(atlas.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    Rng test_rng(derive_seed(seed, {trial_index, kStreamTestSample}));
    const auto test_indices = sample_without_replacement(all, config.num_test_locations, test_rng);
    Rng perturb_rng(derive_seed(seed, {trial_index, kStreamTestPerturb}));

    std::vector<char> is_test(atlas.size(), 0);
    for (std::size_t idx : test_indices)
        is_test[idx] = 1;
    std::vector<std::size_t> remaining;
    remaining.reserve(atlas.size() - test_indices.size());
    for (std::size_t i = 0; i < atlas.size(); ++i)
        if (!is_test[i])
            remaining.push_back(i);
    Rng train_rng(derive_seed(seed, {trial_index, kStreamTraining}));
    const SampledTrainingSet sampled = build_training_set(atlas, config.num_train, config.sigma_train,
                                                          config.meas_noise_var, train_rng, remaining);
    const TrainingSet &d = sampled.set;

    const bool needs_loren =
        std::find(config.algorithms.begin(), config.algorithms.end(), Algorithm::Loren) != config.algorithms.end();
    std::optional<LorenEstimator> loren;
    if (needs_loren)
        loren.emplace(d, estimate_prior(d, config.meas_noise_var), config.assumed_errors());

    TrialResult result;
    std::vector<std::vector<double>> curve_sums(config.algorithms.size());
    for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    {
        result.algorithms.push_back({config.algorithms[a], {}, {}, 0.0, 0.0});
        curve_sums[a].assign(curve_length(config, config.algorithms[a]), 0.0);
    }

    const double noise_std = std::sqrt(config.meas_noise_var);
    for (std::size_t t = 0; t < test_indices.size(); ++t)
    {
        const std::size_t gi = test_indices[t];
        const Point2 reported = perturb_location(atlas.location(gi), config.sigma_test, perturb_rng);
        const RssMatrix &truth = atlas.rss(gi);
        const double best = truth.maxCoeff();
        const auto true_rss = [&](const BeamPair &p) { return atlas.true_rss(gi, p); };

        for (std::size_t a = 0; a < config.algorithms.size(); ++a)
        {
            const Algorithm alg = config.algorithms[a];
            Rng measure_rng(derive_seed(seed, {trial_index, kStreamMeasure, t, static_cast<std::uint64_t>(alg)}));
            const MeasureFn measure = [&](const BeamPair &p) {
                const double z = standard_normal(measure_rng);
                return true_rss(p) + noise_std * z;
            };

            Schedule schedule;
            std::optional<BeamPair> selected;
            switch (alg)
            {
            case Algorithm::Esba:
                schedule = esba_schedule(config.nt, config.nr);
                break;
            case Algorithm::Hsba: {
                HsbaResult h = hsba_run(measure, atlas.tx_hier(), atlas.rx_hier());
                schedule = std::move(h.schedule);
                selected = h.final_pair;
                break;
            }
            case Algorithm::Bim:
                schedule = bim_schedule(d, reported, config.bim_neighbors);
                break;
            case Algorithm::Mabel:
                schedule = mabel_schedule(d, reported);
                break;
            case Algorithm::Loren:
                schedule = loren_schedule(*loren, reported);
                break;
            }
            if (!selected)
                selected = select_best(schedule, measure, config.budget).pair;

            const auto curve = bmbpsf(schedule, true_rss);
            AlgorithmTrial &out = result.algorithms[a];
            out.nmbp_samples.push_back(nmbp(curve, best, config.margin_db));
            out.first_pick_rss += curve.front();
            out.selected_rss += true_rss(*selected);
            const auto padded = pad_to(curve, curve_sums[a].size());
            for (std::size_t i = 0; i < curve_sums[a].size(); ++i)
                curve_sums[a][i] += padded[i];
        }
    }

    const double n = static_cast<double>(test_indices.size());
    for (std::size_t a = 0; a < result.algorithms.size(); ++a)
    {
        AlgorithmTrial &out = result.algorithms[a];
        out.first_pick_rss /= n;
        out.selected_rss /= n;
        out.bmbpsf_curve = curve_sums[a];
        for (double &v : out.bmbpsf_curve)
            v /= n;
    }

    std::vector<Point2> train_locs;
    train_locs.reserve(d.size());
    for (const auto &r : d.records)
        train_locs.push_back(r.true_loc);
    result.mean_nn_distance = mean_nearest_neighbor_distance(train_locs);
    return result;
}

TrialResult run_trial(const CampaignConfig &config, std::size_t trial_index)
{
    validate_fields(config);
    return run_trial(config, make_atlas(config), trial_index);
}

const AlgorithmSummary &CampaignReport::at(Algorithm a) const
{
    for (const auto &s : summary)
        if (s.algorithm == a)
            return s;
    throw std::out_of_range("Algorithm '" + std::string(to_string(a)) + "' was not run.");
}

std::vector<double> CampaignReport::per_trial(Algorithm a,
                                              const std::function<double(const AlgorithmTrial &)> &field) const
{
    std::vector<double> out;
    out.reserve(trials.size());
    for (const auto &t : trials)
        out.push_back(field(t.at(a)));
    return out;
}

unsigned default_thread_count()
{
    if (const char *env = std::getenv("BEAMTRACE_THREADS"))
    {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

CampaignReport run_campaign(const CampaignConfig &config, const ChannelAtlas &atlas, unsigned threads)
{
    validate_against(config, atlas);
    if (threads == 0)
        threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.num_trials));

    CampaignReport report;
    report.trials.resize(config.num_trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        for (std::size_t i = next++; i < config.num_trials && !failed; i = next++)
        {
            try
            {
                report.trials[i] = run_trial(config, atlas, i);
            }
            catch (...)
            {
                if (!failed.exchange(true))
                    failure = std::current_exception();
            }
        }
    };
    if (threads <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    {
        AlgorithmSummary s;
        s.algorithm = config.algorithms[a];
        const std::size_t len = report.trials.front().algorithms[a].bmbpsf_curve.size();
        std::vector<double> column(report.trials.size());
        for (std::size_t i = 0; i < len; ++i)
        {
            for (std::size_t t = 0; t < report.trials.size(); ++t)
                column[t] = report.trials[t].algorithms[a].bmbpsf_curve[i];
            s.bmbpsf_mean.push_back(stats::mean(column));
            s.bmbpsf_median.push_back(stats::median(column));
        }

        std::vector<double> counts;
        std::size_t censored = 0;
        std::vector<double> first, selected;
        for (const auto &trial : report.trials)
        {
            const AlgorithmTrial &at = trial.algorithms[a];
            for (const auto &n : at.nmbp_samples)
            {
                if (n.censored)
                    ++censored;
                else
                    counts.push_back(static_cast<double>(n.count));
            }
            first.push_back(at.first_pick_rss);
            selected.push_back(at.selected_rss);
        }
        s.nmbp_count = counts.size() + censored;
        s.censor_rate = static_cast<double>(censored) / static_cast<double>(s.nmbp_count);
        s.nmbp_mean = counts.empty() ? std::numeric_limits<double>::quiet_NaN() : stats::mean(counts);
        s.nmbp_median = counts.empty() ? std::numeric_limits<double>::quiet_NaN() : stats::median(counts);
        s.first_pick_mean = stats::mean(first);
        s.selected_mean = stats::mean(selected);
        report.summary.push_back(std::move(s));
    }

    double nn = 0.0;
    for (const auto &t : report.trials)
        nn += t.mean_nn_distance;
    report.mean_nn_distance = nn / static_cast<double>(report.trials.size());
    return report;
}

CampaignReport run_campaign(const CampaignConfig &config, unsigned threads)
{
    validate_fields(config);
    return run_campaign(config, make_atlas(config), threads);
}

std::string_view to_string(SweepParam p)
{
    switch (p)
    {
    case SweepParam::SigmaTest:
        return "sigma_test";
    case SweepParam::SigmaTrain:
        return "sigma_train";
    case SweepParam::AssumedSigmaTest:
        return "assumed_sigma_test";
    case SweepParam::AssumedSigmaTrain:
        return "assumed_sigma_train";
    case SweepParam::NumTrain:
        return "num_train";
    case SweepParam::Nt:
        return "nt";
    }
    return "unknown";
}

SweepParam parse_sweep_param(std::string_view name)
{
    for (SweepParam p : {SweepParam::SigmaTest, SweepParam::SigmaTrain, SweepParam::AssumedSigmaTest,
                         SweepParam::AssumedSigmaTrain, SweepParam::NumTrain, SweepParam::Nt})
        if (to_string(p) == name)
            return p;
    throw std::invalid_argument("Unknown sweep parameter '" + std::string(name) + "'.");
}

CampaignConfig apply_sweep(const CampaignConfig &config, SweepParam param, double value, bool match_assumed)
{
    CampaignConfig c = config;
    auto as_count = [&](const char *what) {
        if (!(value >= 0.0) || value != std::floor(value))
            throw std::invalid_argument(std::string(what) + " sweep values must be non-negative integers.");
        return static_cast<std::size_t>(value);
    };
    switch (param)
    {
    case SweepParam::SigmaTest:
        c.sigma_test = value;
        if (match_assumed)
            c.assumed_sigma_test = value;
        break;
    case SweepParam::SigmaTrain:
        c.sigma_train = value;
        if (match_assumed)
            c.assumed_sigma_train = value;
        break;
    case SweepParam::AssumedSigmaTest:
        c.assumed_sigma_test = value;
        break;
    case SweepParam::AssumedSigmaTrain:
        c.assumed_sigma_train = value;
        break;
    case SweepParam::NumTrain:
        c.num_train = as_count("num_train");
        break;
    case SweepParam::Nt:
        c.nt = as_count("nt");
        break;
    }
    return c;
}

std::vector<SweepRow> run_sweep(const CampaignConfig &config, SweepParam param, std::span<const double> values,
                                bool match_assumed, unsigned threads)
{
    std::vector<SweepRow> rows;
    std::optional<ChannelAtlas> shared;
    for (double v : values)
    {
        const CampaignConfig c = apply_sweep(config, param, v, match_assumed);
        validate_fields(c);
        if (param == SweepParam::Nt)
            rows.push_back({v, run_campaign(c, make_atlas(c), threads)});
        else
        {
            if (!shared)
                shared.emplace(make_atlas(c));
            rows.push_back({v, run_campaign(c, *shared, threads)});
        }
    }
    return rows;
}

} // namespace beamtrace
