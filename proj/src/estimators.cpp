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

#include "beamtrace/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace beamtrace {

namespace {

// exp() of anything below this underflows to (sub)normal garbage.
constexpr double kUnderflowExponent = -700.0;
constexpr double kMinPriorVar = 1e-6;

Eigen::MatrixXd flatten(const TrainingSet &d, const std::vector<RssMatrix> &values)
{
    const auto mt = static_cast<Eigen::Index>(d.tx_beams());
    const auto mr = static_cast<Eigen::Index>(d.rx_beams());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(values.size()), mt * mr);
    for (std::size_t l = 0; l < values.size(); ++l)
        for (Eigen::Index m = 0; m < mt; ++m)
            for (Eigen::Index k = 0; k < mr; ++k)
                out(static_cast<Eigen::Index>(l), m * mr + k) = values[l](m, k);
    return out;
}

RssMatrix unflatten(const Eigen::RowVectorXd &row, Eigen::Index mt, Eigen::Index mr)
{
    RssMatrix out(mt, mr);
    for (Eigen::Index m = 0; m < mt; ++m)
        for (Eigen::Index k = 0; k < mr; ++k)
            out(m, k) = row(m * mr + k);
    return out;
}

std::vector<RssMatrix> shrink_all(const TrainingSet &d, const PriorModel &prior, double var_noise)
{
    std::vector<RssMatrix> out;
    out.reserve(d.size());
    for (const auto &rec : d.records)
    {
        RssMatrix s(rec.rss_meas.rows(), rec.rss_meas.cols());
        for (Eigen::Index m = 0; m < s.rows(); ++m)
            for (Eigen::Index k = 0; k < s.cols(); ++k)
                s(m, k) = shrink(rec.rss_meas(m, k), prior.mean(m, k), prior.var(m, k), var_noise);
        out.push_back(std::move(s));
    }
    return out;
}

void check_prior(const TrainingSet &d, const PriorModel &prior)
{
    const auto mt = static_cast<Eigen::Index>(d.tx_beams());
    const auto mr = static_cast<Eigen::Index>(d.rx_beams());
    if (prior.mean.rows() != mt || prior.mean.cols() != mr || prior.var.rows() != mt || prior.var.cols() != mr)
        throw std::invalid_argument("Prior dimensions do not match the training set.");
}

} // namespace

std::size_t TrainingSet::tx_beams() const
{
    return records.empty() ? 0 : static_cast<std::size_t>(records.front().rss_meas.rows());
}

std::size_t TrainingSet::rx_beams() const
{
    return records.empty() ? 0 : static_cast<std::size_t>(records.front().rss_meas.cols());
}

std::vector<Point2> TrainingSet::est_locations() const
{
    std::vector<Point2> locs;
    locs.reserve(records.size());
    for (const auto &r : records)
        locs.push_back(r.est_loc);
    return locs;
}

void validate_training_set(const TrainingSet &d)
{
    if (d.empty())
        throw std::invalid_argument("Training set is empty.");
    const auto mt = d.records.front().rss_meas.rows();
    const auto mr = d.records.front().rss_meas.cols();
    if (mt == 0 || mr == 0)
        throw std::invalid_argument("Training records need a nonempty RSS matrix.");
    for (std::size_t l = 0; l < d.size(); ++l)
    {
        const auto &r = d.records[l];
        if (r.rss_meas.rows() != mt || r.rss_meas.cols() != mr)
            throw std::invalid_argument("Training record " + std::to_string(l) + " has mismatched dimensions.");
        if (!r.rss_meas.allFinite() || !r.est_loc.allFinite())
            throw std::invalid_argument("Training record " + std::to_string(l) + " is not finite.");
    }
}

std::size_t nearest_record(const TrainingSet &d, const Point2 &query)
{
    if (d.empty())
        throw std::invalid_argument("Training set is empty.");
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < d.size(); ++l)
    {
        const double dist = (d.records[l].est_loc - query).squaredNorm();
        if (dist < best_dist)
        {
            best_dist = dist;
            best = l;
        }
    }
    return best;
}

RssMatrix knn1_predict(const TrainingSet &d, const Point2 &query)
{
    return d.records[nearest_record(d, query)].rss_meas;
}

double shrink(double meas, double mu, double var_prior, double var_noise)
{
    if (var_prior < 0.0 || var_noise < 0.0)
        throw std::invalid_argument("Variances must be non-negative.");
    if (var_noise == 0.0)
        return meas;
    if (var_prior == 0.0)
        return mu;
    return mu + var_prior / (var_prior + var_noise) * (meas - mu);
}

std::optional<Eigen::VectorXd> kernel_weights(const Point2 &query, std::span<const Point2> locs, double sigma)
{
    if (locs.empty())
        throw std::invalid_argument("Kernel weights need at least one location.");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("Kernel bandwidth must be finite and non-negative.");
    if (sigma == 0.0)
        return std::nullopt;

    const auto n = static_cast<Eigen::Index>(locs.size());
    const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
    Eigen::VectorXd exponent(n);
    Eigen::Index argmax = 0;
    for (Eigen::Index l = 0; l < n; ++l)
    {
        exponent(l) = -(locs[static_cast<std::size_t>(l)] - query).squaredNorm() * inv_two_var;
        if (exponent(l) > exponent(argmax))
            argmax = l;
    }

    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    if (exponent(argmax) < kUnderflowExponent)
    {
        w(argmax) = 1.0;
        return w;
    }
    const double top = exponent(argmax);
    for (Eigen::Index l = 0; l < n; ++l)
        w(l) = std::exp(exponent(l) - top);
    w /= w.sum();
    return w;
}

PriorModel estimate_prior(const TrainingSet &d, double var_noise)
{
    if (d.size() < 2)
        throw std::invalid_argument("Prior estimation needs at least two training records.");
    if (var_noise < 0.0)
        throw std::invalid_argument("Noise variance must be non-negative.");
    validate_training_set(d);

    const double n = static_cast<double>(d.size());
    PriorModel prior;
    prior.mean = RssMatrix::Zero(d.records.front().rss_meas.rows(), d.records.front().rss_meas.cols());
    for (const auto &r : d.records)
        prior.mean += r.rss_meas;
    prior.mean /= n;

    RssMatrix sq = RssMatrix::Zero(prior.mean.rows(), prior.mean.cols());
    for (const auto &r : d.records)
        sq += (r.rss_meas - prior.mean).cwiseAbs2();
    prior.var = (sq / (n - 1.0)).array() - var_noise;
    prior.var = prior.var.cwiseMax(kMinPriorVar);
    return prior;
}

std::vector<RssMatrix> inner_estimates(const TrainingSet &d, const PriorModel &prior, const ErrorModel &err)
{
    validate_training_set(d);
    check_prior(d, prior);
    std::vector<RssMatrix> shrunk = shrink_all(d, prior, err.meas_noise_var);
    if (err.sigma_train == 0.0 || d.size() == 1)
        return shrunk;

    const std::vector<Point2> locs = d.est_locations();
    const auto n = static_cast<Eigen::Index>(locs.size());
    Eigen::MatrixXd weights(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
        weights.row(l) = kernel_weights(locs[static_cast<std::size_t>(l)], locs, err.sigma_train)->transpose();

    const Eigen::MatrixXd smoothed = weights * flatten(d, shrunk);
    std::vector<RssMatrix> out;
    out.reserve(d.size());
    const auto mt = static_cast<Eigen::Index>(d.tx_beams());
    const auto mr = static_cast<Eigen::Index>(d.rx_beams());
    for (Eigen::Index l = 0; l < n; ++l)
        out.push_back(unflatten(smoothed.row(l), mt, mr));
    return out;
}

LorenEstimator::LorenEstimator(const TrainingSet &d, const PriorModel &prior, const ErrorModel &err)
    : locations_(d.est_locations()),
      inner_(flatten(d, inner_estimates(d, prior, err))),
      tx_beams_(static_cast<Eigen::Index>(d.tx_beams())),
      rx_beams_(static_cast<Eigen::Index>(d.rx_beams())),
      sigma_test_(err.sigma_test)
{
    if (!(sigma_test_ >= 0.0))
        throw std::invalid_argument("Test location bandwidth must be non-negative.");
}

RssMatrix LorenEstimator::predict(const Point2 &query) const
{
    const auto weights = kernel_weights(query, locations_, sigma_test_);
    if (!weights)
    {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < locations_.size(); ++l)
        {
            const double dist = (locations_[l] - query).squaredNorm();
            if (dist < best_dist)
            {
                best_dist = dist;
                best = l;
            }
        }
        return unflatten(inner_.row(static_cast<Eigen::Index>(best)), tx_beams_, rx_beams_);
    }
    const Eigen::RowVectorXd row = weights->transpose() * inner_;
    return unflatten(row, tx_beams_, rx_beams_);
}

RssMatrix loren_predict(const TrainingSet &d, const Point2 &query, const PriorModel &prior, const ErrorModel &err)
{
    return LorenEstimator(d, prior, err).predict(query);
}

} // namespace beamtrace
