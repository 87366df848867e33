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

#include <vector>

#include <Eigen/Core>

#include "mamimo/geometry.hpp"

namespace mamimo::qp {

/// One halfspace a^T x >= beta.
struct Halfspace {
    Eigen::Vector2d normal;
    double offset = 0.0;

    double residual(const Eigen::Vector2d& x) const {
        return normal.dot(x) - offset;
    }
};

/// minimize  c ||x||^2 + g^T x
/// subject to a_j^T x >= beta_j for every halfspace, x in box.
/// The Hessian is isotropic (2c I), which is the exact shape produced by the
/// position surrogates.
struct QpProblem {
    double curvature = 1.0;  ///< c > 0
    Eigen::Vector2d gradient = Eigen::Vector2d::Zero();  ///< g
    std::vector<Halfspace> constraints;
    Rect box;

    double objective(const Eigen::Vector2d& x) const {
        return curvature * x.squaredNorm() + gradient.dot(x);
    }
};

struct QpResult {
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    bool converged = false;   ///< KKT satisfied (false: best feasible iterate)
    int iterations = 0;
    double kkt_residual = 0.0;
};

inline constexpr double kConstraintTol = 1e-9;
inline constexpr double kKktTol = 1e-7;
inline constexpr int kMaxActiveSetIters = 200;

/// Active-set solve specialized to two dimensions (at most two active
/// constraints). `feasible_start` must satisfy every constraint to 1e-9;
/// the returned point is feasible to the same tolerance and its objective
/// never exceeds the start's. If the active-set loop fails to reach a KKT
/// point, an exhaustive enumeration over candidate active sets (cheap in 2D)
/// is used instead.
QpResult solve(const QpProblem& problem, const Eigen::Vector2d& feasible_start);

}  // namespace mamimo::qp
