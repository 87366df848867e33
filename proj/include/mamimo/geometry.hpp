// mamimo - movable-antenna multiuser MIMO downlink optimization
// Copyright (C) 2026 the mamimo authors
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

#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

namespace mamimo {

/// Axis-aligned rectangle. All movement regions and planar cells are
/// rectangles, so projection onto them is per-coordinate clamping.
struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diagonal() const { return std::hypot(width(), height()); }

    Eigen::Vector2d center() const {
        return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    }

    bool valid() const { return xmax >= xmin && ymax >= ymin; }

    bool contains(const Eigen::Vector2d& p, double tol = 0.0) const {
        return p.x() >= xmin - tol && p.x() <= xmax + tol &&
               p.y() >= ymin - tol && p.y() <= ymax + tol;
    }

    bool contains(const Rect& inner, double tol = 0.0) const {
        return inner.xmin >= xmin - tol && inner.xmax <= xmax + tol &&
               inner.ymin >= ymin - tol && inner.ymax <= ymax + tol;
    }

    /// Nearest-point projection (per-coordinate clamp).
    Eigen::Vector2d clamp(const Eigen::Vector2d& p) const {
        return {std::clamp(p.x(), xmin, xmax), std::clamp(p.y(), ymin, ymax)};
    }
};

/// Euclidean distance between two axis-aligned rectangles (0 if they overlap).
inline double rect_distance(const Rect& a, const Rect& b) {
    const double dx = std::max({a.xmin - b.xmax, b.xmin - a.xmax, 0.0});
    const double dy = std::max({a.ymin - b.ymax, b.ymin - a.ymax, 0.0});
    return std::hypot(dx, dy);
}

}  // namespace mamimo
