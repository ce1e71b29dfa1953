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

#include <Eigen/Core>

namespace beamtrace {

using Point2 = Eigen::Vector2d;

// Axis-aligned rectangle in meters.
struct Rect
{
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool valid() const { return xmax > xmin && ymax > ymin; }

    // Strictly inside (boundary excluded).
    bool contains_interior(const Point2 &p) const;
    // Inside or on the boundary.
    bool contains_closed(const Point2 &p) const;
    // True if `other` lies inside this rectangle (boundary allowed).
    bool encloses(const Rect &other) const;

    bool operator==(const Rect &) const = default;
};

/// True when the closed segment a-b passes through the open interior of r.
/// Segments that only touch the boundary (grazing along an edge or through a
/// corner) do not count as hitting the interior.
bool segment_hits_interior(const Point2 &a, const Point2 &b, const Rect &r);

// Wrap an angle into (-pi, pi].
double wrap_angle(double angle);

} // namespace beamtrace
