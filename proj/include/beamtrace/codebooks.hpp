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
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace beamtrace {

/// Ordered set of unit-norm beamforming vectors, stored as the columns of an
/// n x M matrix.
class Codebook
{
  public:
    Codebook() = default;
    explicit Codebook(Eigen::MatrixXcd columns);

    std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
    std::size_t dimension() const { return static_cast<std::size_t>(vectors_.rows()); }
    Eigen::VectorXcd operator[](std::size_t i) const { return vectors_.col(static_cast<Eigen::Index>(i)); }
    const Eigen::MatrixXcd &matrix() const { return vectors_; }

  private:
    Eigen::MatrixXcd vectors_;
};

/// DFT codebook: vector m has entries exp(j 2 pi m k / n) / sqrt(n).
Codebook dft_codebook(std::size_t n);

/// Pointing direction (sine of the angle off broadside) of DFT beam m for a
/// half-wavelength ULA, wrapped into (-1, 1].
double dft_pointing_sine(std::size_t m, std::size_t n);

/// DFT indices sorted by pointing direction; ties keep index order.
std::vector<std::size_t> dft_angular_order(std::size_t n);

/// Nested codebook for bisection search.
///
/// Level l (1..depth) holds 2^l beams. Beam (l, i) covers the contiguous block
/// of angularly sorted leaf positions [i * 2^(depth-l), (i+1) * 2^(depth-l))
/// and is the normalized sum of the DFT vectors in that block. The leaf level
/// (l = depth) therefore holds the DFT codebook in angular order; use
/// `dft_index` to map a leaf position back to its DFT index.
class HierCodebook
{
  public:
    HierCodebook() = default;

    int depth() const { return static_cast<int>(levels_.size()); }
    std::size_t antennas() const { return leaf_to_dft_.size(); }

    // 1-based level.
    const Codebook &level(int l) const;
    std::pair<std::size_t, std::size_t> children(int l, std::size_t i) const;
    // Half-open range of sorted leaf positions covered by beam (l, i).
    std::pair<std::size_t, std::size_t> leaf_block(int l, std::size_t i) const;
    std::size_t dft_index(std::size_t leaf_position) const { return leaf_to_dft_.at(leaf_position); }

  private:
    friend HierCodebook hierarchical_codebook(std::size_t n);

    std::vector<Codebook> levels_;
    std::vector<std::size_t> leaf_to_dft_;
};

/// Requires n = 2^q with q >= 1.
HierCodebook hierarchical_codebook(std::size_t n);

} // namespace beamtrace
