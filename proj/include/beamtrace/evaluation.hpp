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

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "beamtrace/alignment.hpp"
#include "beamtrace/codebooks.hpp"
#include "beamtrace/estimators.hpp"
#include "beamtrace/propagation.hpp"

namespace beamtrace {

using Rng = std::mt19937_64;

/// Mixes a master seed with stream keys (SplitMix64) into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

/// loc + sigma * (z1, z2) with z standard normal. Always consumes two
/// normal draws so streams stay aligned across sigma values.
Point2 perturb_location(const Point2 &loc, double sigma, Rng &rng);

/// Fixed urban layout used by the built-in campaign defaults and the acceptance suite.
Scene default_scene();

/// Scene with `n_obstacles` randomly placed buildings that keep clear of the BS.
Scene random_scene(std::uint64_t seed, std::size_t n_obstacles, const Scene &base = Scene{});

/// Cell-centred lattice over the region, minus points inside (or on) an
/// obstacle, the BS location itself and points that no path reaches.
std::vector<Point2> make_grid(const Scene &scene, double spacing);

/// Channels, exhaustive RSS matrices and codebooks for every grid point.
class ChannelAtlas
{
  public:
    ChannelAtlas(const Scene &scene, double grid_spacing, const ArrayConfig &bs, const ArrayConfig &ue,
                 double tx_power_dbm);

    std::size_t size() const { return locations_.size(); }
    const Point2 &location(std::size_t i) const { return locations_[i]; }
    const std::vector<Point2> &locations() const { return locations_; }
    const ChannelMatrix &channel(std::size_t i) const { return channels_[i]; }
    const RssMatrix &rss(std::size_t i) const { return rss_[i]; }

    const Codebook &tx_codebook() const { return tx_codebook_; }
    const Codebook &rx_codebook() const { return rx_codebook_; }
    bool has_hierarchical() const { return tx_hier_.has_value() && rx_hier_.has_value(); }
    const HierCodebook &tx_hier() const { return *tx_hier_; }
    const HierCodebook &rx_hier() const { return *rx_hier_; }
    double tx_power_dbm() const { return tx_power_dbm_; }

    Eigen::VectorXcd tx_vector(const BeamPair &p) const;
    Eigen::VectorXcd rx_vector(const BeamPair &p) const;

    /// True RSS of any (possibly wide) pair at grid point i.
    double true_rss(std::size_t i, const BeamPair &p) const;

  private:
    std::vector<Point2> locations_;
    std::vector<ChannelMatrix> channels_;
    std::vector<RssMatrix> rss_;
    Codebook tx_codebook_;
    Codebook rx_codebook_;
    std::optional<HierCodebook> tx_hier_;
    std::optional<HierCodebook> rx_hier_;
    double tx_power_dbm_ = 0.0;
};

struct SampledTrainingSet
{
    TrainingSet set;
    std::vector<std::size_t> grid_indices; // atlas index of each record
};

/// Draws L distinct grid points (from `candidates` when given), measures
/// every pair with N(0, noise_var) dB noise and reports each location with
/// N(0, sigma_train^2 I) error.
SampledTrainingSet build_training_set(const ChannelAtlas &atlas, std::size_t num_train, double sigma_train,
                                      double noise_var, Rng &rng, std::span<const std::size_t> candidates = {});

/// Running maximum of the true RSS along the schedule.
std::vector<double> bmbpsf(const Schedule &order, const std::function<double(const BeamPair &)> &true_rss);
/// Same, for schedules that only reference flat codebook pairs.
std::vector<double> bmbpsf(const Schedule &order, const RssMatrix &true_rss);

struct NmbpResult
{
    std::size_t count = 0; // 1-based; schedule length when censored
    bool censored = false;

    bool operator==(const NmbpResult &) const = default;
};

/// First 1-based position where the running maximum reaches best - margin.
NmbpResult nmbp(std::span<const double> curve, double best, double margin);
NmbpResult nmbp(const Schedule &order, const RssMatrix &true_rss, double margin);

/// Mean distance from each location to its nearest other location.
double mean_nearest_neighbor_distance(std::span<const Point2> locs);

struct CampaignConfig
{
    Scene scene = default_scene();
    double grid_spacing = 1.0;        // m
    std::size_t nt = 16;
    std::size_t nr = 4;
    double ue_orientation = 0.0;      // rad
    double tx_power_dbm = 0.0;
    std::size_t num_train = 500;      // L
    double sigma_train = 0.0;         // m, data generation
    double sigma_test = 25.0;         // m, data generation
    double assumed_sigma_train = 0.0; // m, LOREN input
    double assumed_sigma_test = 25.0; // m, LOREN input
    double meas_noise_var = 0.0;      // dB^2
    double margin_db = 1.0;
    std::size_t num_trials = 50;
    std::size_t num_test_locations = 50;
    std::uint64_t master_seed = 1;
    std::vector<Algorithm> algorithms = all_algorithms();
    std::size_t budget = 10;          // B
    std::size_t bim_neighbors = 5;    // K

    ArrayConfig bs_array() const;
    ArrayConfig ue_array() const;
    ErrorModel assumed_errors() const;

    bool operator==(const CampaignConfig &) const;
};

/// Throws std::invalid_argument naming the offending field.
void validate_config(const CampaignConfig &config);

struct AlgorithmTrial
{
    Algorithm algorithm = Algorithm::Esba;
    std::vector<double> bmbpsf_curve; // dBm, averaged over test locations
    std::vector<NmbpResult> nmbp_samples;
    double first_pick_rss = 0.0;      // dBm, mean over test locations
    double selected_rss = 0.0;        // dBm, true RSS of the pair picked with budget B

    bool operator==(const AlgorithmTrial &) const = default;
};

struct TrialResult
{
    std::vector<AlgorithmTrial> algorithms; // same order as config.algorithms
    double mean_nn_distance = 0.0;          // over the training locations

    const AlgorithmTrial &at(Algorithm a) const;
    bool operator==(const TrialResult &) const = default;
};

TrialResult run_trial(const CampaignConfig &config, const ChannelAtlas &atlas, std::size_t trial_index);
TrialResult run_trial(const CampaignConfig &config, std::size_t trial_index);

struct AlgorithmSummary
{
    Algorithm algorithm = Algorithm::Esba;
    std::vector<double> bmbpsf_mean;
    std::vector<double> bmbpsf_median;
    double nmbp_mean = 0.0;   // over uncensored samples; NaN if none
    double nmbp_median = 0.0; // over uncensored samples; NaN if none
    double censor_rate = 0.0;
    std::size_t nmbp_count = 0;
    double first_pick_mean = 0.0;
    double selected_mean = 0.0;
};

struct CampaignReport
{
    std::vector<TrialResult> trials;
    std::vector<AlgorithmSummary> summary;
    double mean_nn_distance = 0.0;

    const AlgorithmSummary &at(Algorithm a) const;
    /// Per-trial values of `field` for one algorithm.
    std::vector<double> per_trial(Algorithm a, const std::function<double(const AlgorithmTrial &)> &field) const;
};

/// Worker count: BEAMTRACE_THREADS if set, else hardware concurrency.
unsigned default_thread_count();

CampaignReport run_campaign(const CampaignConfig &config, const ChannelAtlas &atlas, unsigned threads = 0);
CampaignReport run_campaign(const CampaignConfig &config, unsigned threads = 0);
ChannelAtlas make_atlas(const CampaignConfig &config);

enum class SweepParam
{
    SigmaTest,
    SigmaTrain,
    AssumedSigmaTest,
    AssumedSigmaTrain,
    NumTrain,
    Nt,
};

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view name);

/// Copy of `config` with the swept parameter set. With `match_assumed`, a
/// sweep over a true error level also sets the matching LOREN assumption.
CampaignConfig apply_sweep(const CampaignConfig &config, SweepParam param, double value, bool match_assumed);

struct SweepRow
{
    double value = 0.0;
    CampaignReport report;
};

std::vector<SweepRow> run_sweep(const CampaignConfig &config, SweepParam param, std::span<const double> values,
                                bool match_assumed, unsigned threads = 0);

} // namespace beamtrace
