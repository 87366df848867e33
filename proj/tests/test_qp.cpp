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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "mamimo/qp.hpp"
#include "mamimo/rng.hpp"
#include "oracles.hpp"

using namespace mamimo;
using doctest::Approx;

namespace {

qp::QpProblem random_problem(Rng& rng, int halfspaces, Eigen::Vector2d& start) {
    qp::QpProblem problem;
    problem.curvature = std::exp(rng.uniform(-1.0, 2.0));
    problem.gradient = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    problem.box = Rect{-4.0, -4.0, 4.0, 4.0};
    start = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    for (int c = 0; c < halfspaces; ++c) {
        const double angle = rng.uniform(0.0, 2.0 * M_PI);
        const Eigen::Vector2d normal{std::cos(angle), std::sin(angle)};
        // Keep `start` feasible by construction.
        problem.constraints.push_back({normal, normal.dot(start) - rng.uniform(0.0, 3.0)});
    }
    return problem;
}

}  // namespace

TEST_CASE("interior optimum is returned exactly") {
    qp::QpProblem problem;
    problem.curvature = 2.0;
    problem.gradient = {-2.0, 4.0};
    problem.box = Rect{-3.0, -3.0, 3.0, 3.0};
    const auto result = qp::solve(problem, {0.0, 0.0});
    CHECK(result.converged);
    CHECK(result.x.x() == Approx(0.5));   // -g/(2c)
    CHECK(result.x.y() == Approx(-1.0));
    CHECK(result.kkt_residual <= qp::kKktTol);
}

TEST_CASE("a single violated halfspace projects the center onto its boundary") {
    qp::QpProblem problem;
    problem.curvature = 1.5;
    problem.gradient = {0.0, 0.0};  // center at the origin
    problem.box = Rect{-10.0, -10.0, 10.0, 10.0};
    const Eigen::Vector2d normal = Eigen::Vector2d(1.0, 2.0).normalized();
    problem.constraints.push_back({normal, 1.0});  // origin violates n.x >= 1

    const Eigen::Vector2d start = 2.0 * normal;  // feasible
    const auto result = qp::solve(problem, start);
    CHECK(result.converged);
    // Hand KKT: x = beta * n, lambda = 2 c beta > 0.
    const Eigen::Vector2d expected = 1.0 * normal;
    CHECK((result.x - expected).norm() < 1e-10);
    CHECK(result.kkt_residual <= qp::kKktTol);
}

TEST_CASE("box clamp example") {
    qp::QpProblem problem;
    problem.curvature = 1.0;
    problem.gradient = {-4.0, 0.0};  // center (2, 0)
    problem.box = Rect{0.0, 0.0, 1.0, 1.0};
    const auto result = qp::solve(problem, {0.5, 0.5});
    CHECK(result.converged);
    CHECK(result.x.x() == Approx(1.0));
    CHECK(result.x.y() == Approx(0.0));
}

TEST_CASE("solution is invariant under constraint reordering") {
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::Vector2d start;
        qp::QpProblem problem = random_problem(rng, 8, start);
        const auto a = qp::solve(problem, start);

        qp::QpProblem shuffled = problem;
        std::mt19937 gen(static_cast<unsigned>(rep));
        std::shuffle(shuffled.constraints.begin(), shuffled.constraints.end(), gen);
        const auto b = qp::solve(shuffled, start);
        CHECK(std::abs(problem.objective(a.x) - problem.objective(b.x)) < 1e-10);
        CHECK((a.x - b.x).norm() < 1e-8);
    }
}

TEST_CASE("box-only problems reduce to a per-coordinate clamp") {
    Rng rng(32);
    for (int rep = 0; rep < 100; ++rep) {
        qp::QpProblem problem;
        problem.curvature = std::exp(rng.uniform(-1.0, 2.0));
        problem.gradient = {rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)};
        problem.box = Rect{-1.0, 0.5, 2.0, 3.0};
        const Eigen::Vector2d start{rng.uniform(-1.0, 2.0), rng.uniform(0.5, 3.0)};
        const auto result = qp::solve(problem, start);
        const Eigen::Vector2d clamp =
            problem.box.clamp(-problem.gradient / (2.0 * problem.curvature));
        CHECK((result.x - clamp).norm() < 1e-10);
    }
}

TEST_CASE("matches the vertex-enumeration oracle on random instances") {
    Rng rng(33);
    for (int rep = 0; rep < 300; ++rep) {
        Eigen::Vector2d start;
        qp::QpProblem problem = random_problem(rng, rep % 16, start);
        const auto result = qp::solve(problem, start);
        const double oracle = oracles::qp_oracle_objective(problem);
        CHECK(problem.objective(result.x) <= oracle + 1e-8);
        CHECK(problem.objective(result.x) <= problem.objective(start) + 1e-12);
        for (const auto& h : problem.constraints)
            CHECK(h.residual(result.x) >= -qp::kConstraintTol * h.normal.norm());
        CHECK(problem.box.contains(result.x, qp::kConstraintTol));
    }
}

TEST_CASE("invalid inputs are rejected") {
    qp::QpProblem problem;
    problem.curvature = 0.0;
    CHECK_THROWS_AS(qp::solve(problem, {0.0, 0.0}), std::invalid_argument);

    problem.curvature = 1.0;
    problem.box = Rect{0.0, 0.0, 1.0, 1.0};
    CHECK_THROWS_AS(qp::solve(problem, {5.0, 5.0}), std::invalid_argument);
}
