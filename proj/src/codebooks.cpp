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

#include "beamtrace/codebooks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace beamtrace {

Codebook::Codebook(Eigen::MatrixXcd columns)
    : vectors_(std::move(columns))
{
    if (vectors_.cols() == 0 || vectors_.rows() == 0)
        throw std::invalid_argument("Codebook must contain at least one nonempty vector.");
    for (Eigen::Index i = 0; i < vectors_.cols(); ++i)
    {
        const double norm = vectors_.col(i).norm();
        if (std::abs(norm - 1.0) > 1e-12)
            throw std::invalid_argument("Codebook vector " + std::to_string(i) + " is not unit norm.");
    }
}

Codebook dft_codebook(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("DFT codebook size must be at least 1.");
    const auto size = static_cast<Eigen::Index>(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Eigen::MatrixXcd f(size, size);
    for (Eigen::Index m = 0; m < size; ++m)
        for (Eigen::Index k = 0; k < size; ++k)
        {
            // Reduce m*k modulo n first so the phase stays exact for large n.
            const auto mk = static_cast<double>((m * k) % size);
            f(k, m) = scale * std::polar(1.0, 2.0 * std::numbers::pi * mk / static_cast<double>(n));
        }
    return Codebook(std::move(f));
}

double dft_pointing_sine(std::size_t m, std::size_t n)
{
    // exp(j 2 pi m k / n) = exp(j pi k u) for a half-wavelength ULA, so u = 2m/n mod 2.
    if (2 * m <= n)
        return 2.0 * static_cast<double>(m) / static_cast<double>(n);
    return 2.0 * static_cast<double>(m) / static_cast<double>(n) - 2.0;
}

std::vector<std::size_t> dft_angular_order(std::size_t n)
{
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [n](std::size_t a, std::size_t b) {
        return dft_pointing_sine(a, n) < dft_pointing_sine(b, n);
    });
    return order;
}

const Codebook &HierCodebook::level(int l) const
{
    if (l < 1 || l > depth())
        throw std::out_of_range("Hierarchical codebook level " + std::to_string(l) + " out of range.");
    return levels_[static_cast<std::size_t>(l - 1)];
}

std::pair<std::size_t, std::size_t> HierCodebook::children(int l, std::size_t i) const
{
    if (l < 1 || l >= depth())
        throw std::out_of_range("Leaf beams have no children.");
    if (i >= level(l).size())
        throw std::out_of_range("Beam index out of range.");
    return {2 * i, 2 * i + 1};
}

std::pair<std::size_t, std::size_t> HierCodebook::leaf_block(int l, std::size_t i) const
{
    const std::size_t width = std::size_t{1} << static_cast<unsigned>(depth() - l);
    if (i >= level(l).size())
        throw std::out_of_range("Beam index out of range.");
    return {i * width, (i + 1) * width};
}

HierCodebook hierarchical_codebook(std::size_t n)
{
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("Hierarchical codebook size must be a power of two >= 2, got " +
                                    std::to_string(n) + ".");
    int depth = 0;
    while ((std::size_t{1} << static_cast<unsigned>(depth)) < n)
        ++depth;

    const Codebook leaves = dft_codebook(n);
    HierCodebook hier;
    hier.leaf_to_dft_ = dft_angular_order(n);

    const auto rows = static_cast<Eigen::Index>(n);
    for (int l = 1; l <= depth; ++l)
    {
        const std::size_t count = std::size_t{1} << static_cast<unsigned>(l);
        const std::size_t width = n / count;
        Eigen::MatrixXcd beams(rows, static_cast<Eigen::Index>(count));
        for (std::size_t i = 0; i < count; ++i)
        {
            if (width == 1)
            {
                beams.col(static_cast<Eigen::Index>(i)) = leaves[hier.leaf_to_dft_[i]];
                continue;
            }
            Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(rows);
            for (std::size_t pos = i * width; pos < (i + 1) * width; ++pos)
                sum += leaves[hier.leaf_to_dft_[pos]];
            // DFT columns are orthonormal, so the sum has norm sqrt(width) > 0.
            beams.col(static_cast<Eigen::Index>(i)) = sum / sum.norm();
        }
        hier.levels_.emplace_back(std::move(beams));
    }
    return hier;
}

} // namespace beamtrace
