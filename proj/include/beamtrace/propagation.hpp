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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "beamtrace/codebooks.hpp"
#include "beamtrace/geometry.hpp"

namespace beamtrace {

constexpr double kSpeedOfLight = 299792458.0;

/// RSS values below this are clamped so the dB domain stays finite.
constexpr double kRssFloorDbm = -250.0;

/// Propagation environment: region, BS placement and rectangular buildings.
struct Scene
{
    Rect region{0.0, 0.0, 150.0, 150.0};
    Point2 bs_location{75.0, 5.0};
    Point2 bs_array_axis{1.0, 0.0};
    std::vector<Rect> obstacles;
    std::complex<double> reflection_coeff = std::polar(0.7, 3.14159265358979323846);
    double carrier_freq_hz = 30e9;

    double wavelength() const { return kSpeedOfLight / carrier_freq_hz; }
};

/// Throws std::invalid_argument naming the first violated invariant.
void validate_scene(const Scene &scene);

struct PropPath
{
    std::complex<double> complex_gain;
    double aod = 0.0; // at the BS, relative to the array broadside
    double aoa = 0.0; // at the UE, relative to the array broadside
};

struct ArrayConfig
{
    std::size_t n_elements = 1;
    double element_spacing = 0.5; // wavelengths
    double orientation = 0.0;     // angle of the array axis, radians
};

/// Nr x Nt complex channel matrix.
using ChannelMatrix = Eigen::MatrixXcd;

/// Mt x Mr matrix of RSS values in dBm, indexed (tx beam, rx beam).
using RssMatrix = Eigen::MatrixXd;

/// ULA response: entry k = exp(j 2 pi spacing k sin(angle)) / sqrt(n).
Eigen::VectorXcd steering_vector(double angle, std::size_t n, double spacing = 0.5);

/// Angle of `direction` relative to the broadside of an array whose axis has
/// angle `axis_angle`. Positive toward the array axis.
double angle_from_broadside(const Point2 &direction, double axis_angle);

/// LOS plus first-order wall reflections (image method) from the BS to the UE.
/// Paths are ordered LOS first, then by obstacle index and edge
/// (left, right, bottom, top).
std::vector<PropPath> trace_paths(const Scene &scene, const Point2 &ue_loc, double ue_orientation = 0.0);

/// H = sqrt(Nt Nr) sum_p gain_p a_r(aoa_p) a_t(aod_p)^H.
ChannelMatrix synthesize_channel(std::span<const PropPath> paths, const ArrayConfig &bs, const ArrayConfig &ue);

/// 10 log10(P |w^H H f|^2) in dBm, clamped at kRssFloorDbm.
double rss(const ChannelMatrix &channel, const Eigen::VectorXcd &f, const Eigen::VectorXcd &w, double tx_power_dbm);

/// Every (tx, rx) codebook pair evaluated with `rss`.
RssMatrix rss_matrix(const ChannelMatrix &channel, const Codebook &tx_codebook, const Codebook &rx_codebook,
                     double tx_power_dbm);

} // namespace beamtrace
