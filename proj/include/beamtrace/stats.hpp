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

#include <span>
#include <vector>

namespace beamtrace::stats {

double mean(std::span<const double> xs);
double median(std::span<const double> xs);
// Unbiased (n - 1) sample standard deviation; 0 for fewer than two samples.
double sample_std(std::span<const double> xs);

// Ranks starting at 1, ties receive their average rank.
std::vector<double> ranks(std::span<const double> xs);
double pearson(std::span<const double> xs, std::span<const double> ys);
double spearman(std::span<const double> xs, std::span<const double> ys);

// Quantile of Student's t distribution.
double student_t_quantile(double p, double dof);

// Lower end of the one-sided confidence interval for the mean.
double mean_lower_bound(std::span<const double> xs, double confidence);

} // namespace beamtrace::stats
