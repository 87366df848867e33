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

#include "mamimo/qp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>

namespace mamimo::qp {

namespace {

// Unit-normal halfspace rows; the box contributes four of them, so every
// constraint is handled uniformly and residuals are true distances.
struct Row {
    Eigen::Vector2d a;
    double beta = 0.0;

    double residual(const Eigen::Vector2d& x) const { return a.dot(x) - beta; }
};

std::vector<Row> normalized_rows(const QpProblem& problem) {
    std::vector<Row> rows;
    rows.reserve(problem.constraints.size() + 4);
    for (const Halfspace& h : problem.constraints) {
        const double norm = h.normal.norm();
        if (!(norm > 0.0))
            throw std::invalid_argument("qp: constraint with zero normal");
        rows.push_back({h.normal / norm, h.offset / norm});
    }
    const Rect& box = problem.box;
    rows.push_back({{1.0, 0.0}, box.xmin});
    rows.push_back({{-1.0, 0.0}, -box.xmax});
    rows.push_back({{0.0, 1.0}, box.ymin});
    rows.push_back({{0.0, -1.0}, -box.ymax});
    return rows;
}

bool feasible(const std::vector<Row>& rows, const Eigen::Vector2d& x, double tol) {
    for (const Row& row : rows)
        if (row.residual(x) < -tol)
            return false;
    return true;
}

// Minimizer over the affine set fixed by the active rows. The objective is
// c || x - center ||^2 up to a constant, so this is plain projection.
// Returns false when two active rows are (near-)parallel.
bool equality_minimizer(const std::vector<Row>& rows, const std::vector<int>& active,
                        const Eigen::Vector2d& center, Eigen::Vector2d& out) {
    if (active.empty()) {
        out = center;
        return true;
    }
    if (active.size() == 1) {
        const Row& r = rows[static_cast<std::size_t>(active[0])];
        out = center + (r.beta - r.a.dot(center)) * r.a;
        return true;
    }
    const Row& r0 = rows[static_cast<std::size_t>(active[0])];
    const Row& r1 = rows[static_cast<std::size_t>(active[1])];
    Eigen::Matrix2d A;
    A.row(0) = r0.a.transpose();
    A.row(1) = r1.a.transpose();
    const double det = A.determinant();
    if (std::abs(det) < 1e-12)
        return false;
    out = A.inverse() * Eigen::Vector2d(r0.beta, r1.beta);
    return true;
}

// Lagrange multipliers of stationarity 2c x + g = sum lambda_j a_j over the
// active rows (least squares for the overdetermined cases).
Eigen::VectorXd multipliers(const QpProblem& problem, const std::vector<Row>& rows,
                            const std::vector<int>& active, const Eigen::Vector2d& x) {
    const Eigen::Vector2d grad = 2.0 * problem.curvature * x + problem.gradient;
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(active.size()));
    if (active.size() == 1) {
        lambda[0] = rows[static_cast<std::size_t>(active[0])].a.dot(grad);
    } else if (active.size() == 2) {
        Eigen::Matrix2d A;
        A.col(0) = rows[static_cast<std::size_t>(active[0])].a;
        A.col(1) = rows[static_cast<std::size_t>(active[1])].a;
        const double det = A.determinant();
        if (std::abs(det) < 1e-12) {
            lambda.setZero();
            lambda[0] = rows[static_cast<std::size_t>(active[0])].a.dot(grad);
        } else {
            lambda = A.inverse() * grad;
        }
    }
    return lambda;
}

double kkt_residual(const QpProblem& problem, const std::vector<Row>& rows,
                    const std::vector<int>& active, const Eigen::Vector2d& x) {
    Eigen::Vector2d grad = 2.0 * problem.curvature * x + problem.gradient;
    const Eigen::VectorXd lambda = multipliers(problem, rows, active, x);
    double residual = 0.0;
    for (std::size_t i = 0; i < active.size(); ++i) {
        const Row& row = rows[static_cast<std::size_t>(active[i])];
        grad -= lambda[static_cast<Eigen::Index>(i)] * row.a;
        residual += std::max(0.0, -lambda[static_cast<Eigen::Index>(i)]);
        residual += std::abs(lambda[static_cast<Eigen::Index>(i)] * row.residual(x));
    }
    residual += grad.norm();
    for (const Row& row : rows)
        residual += std::max(0.0, -row.residual(x) - kConstraintTol);
    return residual;
}

// Exhaustive enumeration over candidate active sets: the unconstrained
// minimizer, each single row, and each independent pair. In 2D this covers
// every KKT point, so the feasible candidate nearest the center is the
// global optimum.
QpResult enumerate_solution(const QpProblem& problem, const std::vector<Row>& rows,
                            const Eigen::Vector2d& center) {
    QpResult best;
    double best_obj = std::numeric_limits<double>::infinity();
    const auto consider = [&](const Eigen::Vector2d& x, const std::vector<int>& active) {
        if (!feasible(rows, x, kConstraintTol))
            return;
        const double obj = problem.objective(x);
        if (obj < best_obj) {
            best_obj = obj;
            best.x = x;
            best.kkt_residual = kkt_residual(problem, rows, active, x);
        }
    };

    consider(center, {});
    const int n = static_cast<int>(rows.size());
    Eigen::Vector2d candidate;
    for (int i = 0; i < n; ++i) {
        if (equality_minimizer(rows, {i}, center, candidate))
            consider(candidate, {i});
        for (int j = i + 1; j < n; ++j)
            if (equality_minimizer(rows, {i, j}, center, candidate))
                consider(candidate, {i, j});
    }
    best.converged = std::isfinite(best_obj);
    return best;
}

}  // namespace

QpResult solve(const QpProblem& problem, const Eigen::Vector2d& feasible_start) {
    if (!(problem.curvature > 0.0))
        throw std::invalid_argument("qp: curvature must be positive");
    if (!problem.box.valid())
        throw std::invalid_argument("qp: invalid box");

    const std::vector<Row> rows = normalized_rows(problem);
    if (!feasible(rows, feasible_start, kConstraintTol))
        throw std::invalid_argument("qp: feasible_start violates a constraint");

    const Eigen::Vector2d center = -problem.gradient / (2.0 * problem.curvature);
    const double scale =
        std::max({1.0, center.norm(), feasible_start.norm(), problem.box.diagonal()});

    Eigen::Vector2d x = feasible_start;
    std::vector<int> active;
    QpResult result;

    for (int iter = 0; iter < kMaxActiveSetIters; ++iter) {
        result.iterations = iter + 1;

        Eigen::Vector2d target;
        if (!equality_minimizer(rows, active, center, target)) {
            active.pop_back();  // parallel pair; retry with one row
            continue;
        }

        const Eigen::Vector2d step = target - x;
        if (step.norm() <= 1e-13 * scale) {
            // Stationary on the current active set: check the multipliers.
            if (active.empty()) {
                result.x = x;
                result.converged = true;
                break;
            }
            const Eigen::VectorXd lambda = multipliers(problem, rows, active, x);
            int most_negative = -1;
            double lowest = -1e-11;
            for (Eigen::Index i = 0; i < lambda.size(); ++i)
                if (lambda[i] < lowest) {
                    lowest = lambda[i];
                    most_negative = static_cast<int>(i);
                }
            if (most_negative < 0) {
                result.x = x;
                result.converged = true;
                break;
            }
            active.erase(active.begin() + most_negative);
            continue;
        }

        // Move toward the equality minimizer, stopping at the first
        // blocking constraint.
        double alpha = 1.0;
        int blocker = -1;
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (std::find(active.begin(), active.end(), r) != active.end())
                continue;
            const double along = rows[static_cast<std::size_t>(r)].a.dot(step);
            if (along >= -1e-15 * scale)
                continue;
            const double room =
                std::max(0.0, rows[static_cast<std::size_t>(r)].residual(x));
            const double limit = room / (-along);
            if (limit < alpha) {
                alpha = limit;
                blocker = r;
            }
        }
        x += alpha * step;
        if (blocker >= 0) {
            if (active.size() >= 2)
                active.pop_back();
            active.push_back(blocker);
        } else {
            x = target;  // full step, no new active constraint
        }
    }

    if (!result.converged) {
        result = enumerate_solution(problem, rows, center);
        if (!result.converged) {
            // No feasible candidate survived (degenerate geometry): keep the
            // caller's feasible point and flag it.
            result.x = feasible_start;
            result.converged = false;
            return result;
        }
        result.converged = result.kkt_residual <= kKktTol * scale;
    } else {
        result.x = problem.box.clamp(result.x);  // shave box roundoff
        result.kkt_residual = kkt_residual(problem, rows, active, result.x);
    }

    // Never hand back something worse than the start.
    if (problem.objective(result.x) > problem.objective(feasible_start) ||
        !feasible(rows, result.x, kConstraintTol)) {
        result.x = feasible_start;
        result.converged = false;
        result.kkt_residual = kkt_residual(problem, rows, active, result.x);
    }
    return result;
}

}  // namespace mamimo::qp
