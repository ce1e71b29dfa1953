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

#include "beamtrace/propagation.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beamtrace {

namespace {

struct Edge
{
    bool vertical;   // line x = coord (true) or y = coord (false)
    double coord;    // line position
    double lo, hi;   // open span along the line
    double outward;  // +1 if the outer side has larger coordinate, else -1
};

std::array<Edge, 4> edges_of(const Rect &r)
{
    return {{
        {true, r.xmin, r.ymin, r.ymax, -1.0},  // left
        {true, r.xmax, r.ymin, r.ymax, +1.0},  // right
        {false, r.ymin, r.xmin, r.xmax, -1.0}, // bottom
        {false, r.ymax, r.xmin, r.xmax, +1.0}, // top
    }};
}

bool path_clear(const Scene &scene, const Point2 &a, const Point2 &b)
{
    for (const auto &obs : scene.obstacles)
        if (segment_hits_interior(a, b, obs))
            return false;
    return true;
}

std::complex<double> free_space_gain(double distance, double wavelength)
{
    const double amplitude = wavelength / (4.0 * std::numbers::pi * distance);
    return std::polar(amplitude, -2.0 * std::numbers::pi * distance / wavelength);
}

} // namespace

void validate_scene(const Scene &scene)
{
    if (!scene.region.valid())
        throw std::invalid_argument("Scene region must have positive extent.");
    if (!scene.region.contains_closed(scene.bs_location))
        throw std::invalid_argument("BS location lies outside the region.");
    if (std::abs(scene.bs_array_axis.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("BS array axis must be a unit vector.");
    if (std::abs(scene.reflection_coeff) > 1.0)
        throw std::invalid_argument("Reflection coefficient magnitude exceeds 1.");
    if (!(scene.carrier_freq_hz > 0.0) || !std::isfinite(scene.carrier_freq_hz))
        throw std::invalid_argument("Carrier frequency must be positive.");
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i)
    {
        const Rect &obs = scene.obstacles[i];
        if (!obs.valid())
            throw std::invalid_argument("Obstacle " + std::to_string(i) + " has non-positive extent.");
        if (!scene.region.encloses(obs))
            throw std::invalid_argument("Obstacle " + std::to_string(i) + " lies outside the region.");
        if (obs.contains_closed(scene.bs_location))
            throw std::invalid_argument("Obstacle " + std::to_string(i) + " contains the BS location.");
    }
}

Eigen::VectorXcd steering_vector(double angle, std::size_t n, double spacing)
{
    if (n == 0)
        throw std::invalid_argument("Steering vector needs at least one element.");
    if (!(spacing > 0.0))
        throw std::invalid_argument("Element spacing must be positive.");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double phase_step = 2.0 * std::numbers::pi * spacing * std::sin(angle);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = std::polar(scale, phase_step * static_cast<double>(k));
    return v;
}

double angle_from_broadside(const Point2 &direction, double axis_angle)
{
    const Point2 axis(std::cos(axis_angle), std::sin(axis_angle));
    const Point2 normal(-axis.y(), axis.x());
    return wrap_angle(std::atan2(direction.dot(axis), direction.dot(normal)));
}

std::vector<PropPath> trace_paths(const Scene &scene, const Point2 &ue_loc, double ue_orientation)
{
    if (!scene.region.contains_closed(ue_loc))
        throw std::invalid_argument("UE location lies outside the region.");
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i)
        if (scene.obstacles[i].contains_interior(ue_loc))
            throw std::invalid_argument("UE location lies inside obstacle " + std::to_string(i) + ".");
    const Point2 &bs = scene.bs_location;
    if ((ue_loc - bs).norm() == 0.0)
        throw std::invalid_argument("UE location coincides with the BS.");

    const double lambda = scene.wavelength();
    const double bs_axis = std::atan2(scene.bs_array_axis.y(), scene.bs_array_axis.x());
    std::vector<PropPath> paths;

    if (path_clear(scene, bs, ue_loc))
    {
        const double dist = (ue_loc - bs).norm();
        paths.push_back({free_space_gain(dist, lambda), angle_from_broadside(ue_loc - bs, bs_axis),
                         angle_from_broadside(bs - ue_loc, ue_orientation)});
    }

    for (const auto &obs : scene.obstacles)
    {
        for (const Edge &e : edges_of(obs))
        {
            // Both endpoints must sit strictly on the outer side of the wall.
            const int axis = e.vertical ? 0 : 1;
            const double bs_side = (bs(axis) - e.coord) * e.outward;
            const double ue_side = (ue_loc(axis) - e.coord) * e.outward;
            if (bs_side <= 0.0 || ue_side <= 0.0)
                continue;

            Point2 image = bs;
            image(axis) = 2.0 * e.coord - bs(axis);
            const double t = (e.coord - image(axis)) / (ue_loc(axis) - image(axis));
            Point2 hit = image + t * (ue_loc - image);
            hit(axis) = e.coord;
            const double along = hit(1 - axis);
            if (!(along > e.lo && along < e.hi))
                continue;
            if (!path_clear(scene, bs, hit) || !path_clear(scene, hit, ue_loc))
                continue;

            const double dist = (ue_loc - image).norm();
            paths.push_back({scene.reflection_coeff * free_space_gain(dist, lambda),
                             angle_from_broadside(hit - bs, bs_axis),
                             angle_from_broadside(hit - ue_loc, ue_orientation)});
        }
    }
    return paths;
}

ChannelMatrix synthesize_channel(std::span<const PropPath> paths, const ArrayConfig &bs, const ArrayConfig &ue)
{
    const auto nt = static_cast<Eigen::Index>(bs.n_elements);
    const auto nr = static_cast<Eigen::Index>(ue.n_elements);
    if (nt == 0 || nr == 0)
        throw std::invalid_argument("Arrays need at least one element.");
    ChannelMatrix h = ChannelMatrix::Zero(nr, nt);
    const double scale = std::sqrt(static_cast<double>(nt * nr));
    for (const auto &p : paths)
    {
        if (!std::isfinite(p.complex_gain.real()) || !std::isfinite(p.complex_gain.imag()) ||
            !std::isfinite(p.aod) || !std::isfinite(p.aoa))
            throw std::invalid_argument("Path parameters must be finite.");
        const Eigen::VectorXcd a_r = steering_vector(p.aoa, ue.n_elements, ue.element_spacing);
        const Eigen::VectorXcd a_t = steering_vector(p.aod, bs.n_elements, bs.element_spacing);
        h.noalias() += (scale * p.complex_gain) * a_r * a_t.adjoint();
    }
    return h;
}

namespace {

double power_to_dbm(double gain, double tx_power_dbm)
{
    if (!(gain > 0.0))
        return kRssFloorDbm;
    const double value = tx_power_dbm + 10.0 * std::log10(gain);
    return value < kRssFloorDbm ? kRssFloorDbm : value;
}

} // namespace

double rss(const ChannelMatrix &channel, const Eigen::VectorXcd &f, const Eigen::VectorXcd &w, double tx_power_dbm)
{
    if (f.size() != channel.cols() || w.size() != channel.rows())
        throw std::invalid_argument("Beam vector dimensions do not match the channel.");
    if (std::abs(f.norm() - 1.0) > 1e-9 || std::abs(w.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("Beam vectors must have unit norm.");
    const std::complex<double> y = w.dot(channel * f);
    return power_to_dbm(std::norm(y), tx_power_dbm);
}

RssMatrix rss_matrix(const ChannelMatrix &channel, const Codebook &tx_codebook, const Codebook &rx_codebook,
                     double tx_power_dbm)
{
    if (tx_codebook.dimension() != static_cast<std::size_t>(channel.cols()) ||
        rx_codebook.dimension() != static_cast<std::size_t>(channel.rows()))
        throw std::invalid_argument("Codebook dimensions do not match the channel.");
    const Eigen::MatrixXcd hf = channel * tx_codebook.matrix();
    const Eigen::MatrixXcd y = rx_codebook.matrix().adjoint() * hf; // Mr x Mt
    RssMatrix out(y.cols(), y.rows());
    for (Eigen::Index m = 0; m < y.cols(); ++m)
        for (Eigen::Index k = 0; k < y.rows(); ++k)
            out(m, k) = power_to_dbm(std::norm(y(k, m)), tx_power_dbm);
    return out;
}

} // namespace beamtrace
