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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "beamtrace/geometry.hpp"
#include "beamtrace/propagation.hpp"

namespace beamtrace {

/// One measurement location of the training set.
struct TrainingRecord
{
    Point2 est_loc;    // reported location estimate
    Point2 true_loc;   // kept for evaluation; estimators never read it
    RssMatrix rss_meas; // Mt x Mr measured RSS, dBm
};

struct TrainingSet
{
    std::vector<TrainingRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    std::size_t tx_beams() const;
    std::size_t rx_beams() const;
    std::vector<Point2> est_locations() const;
};

/// Throws std::invalid_argument if the set is empty, ragged or non-finite.
void validate_training_set(const TrainingSet &d);

/// Per-pair Gaussian prior on the dB-domain RSS.
struct PriorModel
{
    RssMatrix mean; // dB
    RssMatrix var;  // dB^2
};

/// Location error and measurement noise assumed by the estimator.
struct ErrorModel
{
    double sigma_train = 0.0;    // m; 0 means training locations are exact
    double sigma_test = 0.0;     // m; 0 means nearest-neighbor fallback
    double meas_noise_var = 0.0; // dB^2
};

/// Index of the record whose est_loc is closest to `query`; ties pick the
/// lowest index.
std::size_t nearest_record(const TrainingSet &d, const Point2 &query);

RssMatrix knn1_predict(const TrainingSet &d, const Point2 &query);

/// Posterior mean of a Gaussian-prior RSS given one Gaussian-noise measurement.
double shrink(double meas, double mu, double var_prior, double var_noise);

/// Normalized Gaussian kernel weights exp(-|loc - query|^2 / (2 sigma^2)).
///
/// Computed with max-exponent subtraction. If every raw exponent is below
/// -700 the weights collapse onto the nearest location (lowest index on ties).
/// Returns nullopt for sigma == 0, which callers treat as nearest-neighbor.
std::optional<Eigen::VectorXd> kernel_weights(const Point2 &query, std::span<const Point2> locs, double sigma);

/// Sample mean and noise-corrected sample variance per beam pair.
PriorModel estimate_prior(const TrainingSet &d, double var_noise);

/// Conditional means of the RSS at each training location (one matrix per
/// record). Uses the shrinkage estimate directly when sigma_train == 0 and the
/// kernel-smoothed shrinkage estimates otherwise.
std::vector<RssMatrix> inner_estimates(const TrainingSet &d, const PriorModel &prior, const ErrorModel &err);

/// Location-robust RSS prediction at a reported location.
RssMatrix loren_predict(const TrainingSet &d, const Point2 &query, const PriorModel &prior, const ErrorModel &err);

/// Precomputes the per-record inner estimates once so that many queries
/// against the same training set cost O(L * Mt * Mr) each.
class LorenEstimator
{
  public:
    LorenEstimator(const TrainingSet &d, const PriorModel &prior, const ErrorModel &err);

    RssMatrix predict(const Point2 &query) const;

    std::size_t size() const { return locations_.size(); }

  private:
    std::vector<Point2> locations_;
    Eigen::MatrixXd inner_;   // L x (Mt*Mr), row-major pair order m*Mr + k
    Eigen::Index tx_beams_ = 0;
    Eigen::Index rx_beams_ = 0;
    double sigma_test_ = 0.0;
};

} // namespace beamtrace
