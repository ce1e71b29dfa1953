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

#include "beamtrace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace beamtrace {

namespace {
constexpr double kEps = 1e-9;
}

bool Rect::contains_interior(const Point2 &p) const
{
    return p.x() > xmin && p.x() < xmax && p.y() > ymin && p.y() < ymax;
}

bool Rect::contains_closed(const Point2 &p) const
{
    return p.x() >= xmin && p.x() <= xmax && p.y() >= ymin && p.y() <= ymax;
}

bool Rect::encloses(const Rect &other) const
{
    return other.xmin >= xmin && other.xmax <= xmax && other.ymin >= ymin && other.ymax <= ymax;
}

bool segment_hits_interior(const Point2 &a, const Point2 &b, const Rect &r)
{
    // Liang-Barsky clip of the segment against the closed rectangle.
    const Point2 d = b - a;
    double t0 = 0.0;
    double t1 = 1.0;
    const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
    const double q[4] = {a.x() - r.xmin, r.xmax - a.x(), a.y() - r.ymin, r.ymax - a.y()};
    for (int i = 0; i < 4; ++i)
    {
        if (p[i] == 0.0)
        {
            if (q[i] < 0.0)
                return false;
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
        if (t0 > t1)
            return false;
    }

    // The clipped piece lies in the closed rectangle; it crosses the interior
    // iff its midpoint is strictly inside with some clearance from the boundary.
    const Point2 mid = a + 0.5 * (t0 + t1) * d;
    const double tol = kEps * std::max({1.0, std::abs(r.xmax), std::abs(r.ymax), std::abs(r.xmin), std::abs(r.ymin)});
    return mid.x() > r.xmin + tol && mid.x() < r.xmax - tol && mid.y() > r.ymin + tol && mid.y() < r.ymax - tol;
}

double wrap_angle(double angle)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(angle, two_pi);
    if (w <= -std::numbers::pi)
        w += two_pi;
    else if (w > std::numbers::pi)
        w -= two_pi;
    return w;
}

} // namespace beamtrace
