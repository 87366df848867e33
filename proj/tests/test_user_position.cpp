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

#include <Eigen/Eigenvalues>

#include "mamimo/bs_position.hpp"
#include "mamimo/rng.hpp"
#include "mamimo/user_position.hpp"
#include "oracles.hpp"

using namespace mamimo;
using doctest::Approx;
using std::complex;

namespace {

double user_objective(const user_position::UserCoefficients& c,
                      const Eigen::Matrix2Xd& dirs_rx, const Eigen::Vector2d& r,
                      double lambda) {
    const Eigen::VectorXcd g = channel::field_response(dirs_rx, r, lambda);
    return std::real((g.adjoint() * c.C * g).value()) + std::real(c.d.dot(g));
}

}  // namespace

TEST_CASE("user coefficients") {
    SUBCASE("a silent receiver contributes nothing") {
        const auto s = oracles::pipeline_state(61);
        const auto& paths = s.scenario.geometry[0];
        const Eigen::MatrixXcd F = channel::field_response_matrix(
            s.positions.bs, paths, s.config.wavelength);
        const auto c = user_position::build_user_coefficients(
            F, paths.path_response, s.W, 0, complex<double>{0.0, 0.0});
        CHECK(c.C.cwiseAbs().maxCoeff() == 0.0);
        CHECK(c.d.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("all-scalar case reduces to hand arithmetic") {
        // M = K = L_t = L_r = 1: C = |u|^2 |Sigma|^2 |w|^2, d = -2 u* Sigma* f* w.
        PathSet paths;
        paths.dirs_tx.resize(2, 1);
        paths.dirs_tx.col(0) = Eigen::Vector2d(1.0, 0.0);
        paths.dirs_rx.resize(2, 1);
        paths.dirs_rx.col(0) = Eigen::Vector2d(0.0, 1.0);
        paths.path_response = Eigen::MatrixXcd(1, 1);
        paths.path_response(0, 0) = complex<double>(0.4, -1.1);

        const std::vector<Eigen::Vector2d> bs{{0.3, 0.9}};
        const Eigen::MatrixXcd F =
            channel::field_response_matrix(bs, paths, 1.0);
        Eigen::MatrixXcd W(1, 1);
        W(0, 0) = complex<double>(0.7, 0.2);
        const complex<double> u{-0.3, 0.5};

        const auto c = user_position::build_user_coefficients(F, paths.path_response, W,
                                                              0, u);
        const complex<double> sigma = paths.path_response(0, 0);
        const complex<double> f = F(0, 0);
        const complex<double> q = std::conj(sigma) * f * W(0, 0);
        CHECK(std::abs(c.C(0, 0) - std::norm(u) * q * std::conj(q)) < 1e-14);
        CHECK(std::abs(c.d(0) - (-2.0 * std::conj(u) * q)) < 1e-14);
        CHECK(c.bound_scale == Approx(std::norm(u) * std::norm(q)).epsilon(1e-12));
    }
    SUBCASE("C is Hermitian positive semidefinite") {
        const auto s = oracles::pipeline_state(62);
        const auto& paths = s.scenario.geometry[1];
        const Eigen::MatrixXcd F = channel::field_response_matrix(
            s.positions.bs, paths, s.config.wavelength);
        const auto c = user_position::build_user_coefficients(F, paths.path_response,
                                                              s.W, 1, s.u[1]);
        CHECK((c.C - c.C.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(c.C);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
        CHECK(eig.eigenvalues().maxCoeff() <= c.bound_scale + 1e-10);
    }
    SUBCASE("reconstructs the per-user error restricted to its position") {
        Rng rng(63);
        const auto s = oracles::pipeline_state(63, /*M=*/3, /*K=*/2, /*L=*/3);
        const int k = 1;
        const auto& paths = s.scenario.geometry[1];
        const Eigen::MatrixXcd F = channel::field_response_matrix(
            s.positions.bs, paths, s.config.wavelength);
        const auto c = user_position::build_user_coefficients(F, paths.path_response,
                                                              s.W, k, s.u[k]);

        const auto restricted = [&](const Eigen::Vector2d& r) {
            return user_objective(c, paths.dirs_rx, r, s.config.wavelength);
        };
        const auto full = [&](const Eigen::Vector2d& r) {
            const auto h = oracles::naive_channel(s.positions.bs, r, paths,
                                                  s.config.wavelength);
            return oracles::naive_mse(h, s.W, k, s.u[k], s.config.noise_power);
        };
        const Eigen::Vector2d anchor{0.4, 1.3};
        const double offset = full(anchor) - restricted(anchor);
        for (int rep = 0; rep < 100; ++rep) {
            const Eigen::Vector2d r{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
            CHECK(restricted(r) + offset ==
                  Approx(full(r)).epsilon(1e-10).scale(1.0 + std::abs(full(r))));
        }
    }
}

TEST_CASE("user position update") {
    SUBCASE("zero gradient keeps the position") {
        UserSurrogate s;
        s.curvature = 2.0;
        s.grad_z = Eigen::Vector2d::Zero();
        s.expansion_point = Eigen::Vector2d(0.7, 0.7);
        CHECK(user_position::update_user_position(s, Rect{0.0, 0.0, 2.0, 2.0}) ==
              s.expansion_point);
    }
    SUBCASE("zero curvature keeps the position") {
        UserSurrogate s;
        s.expansion_point = Eigen::Vector2d(0.5, 0.5);
        CHECK(user_position::update_user_position(s, Rect{0.0, 0.0, 2.0, 2.0}) ==
              s.expansion_point);
    }
    SUBCASE("steps outside the region clamp per coordinate") {
        UserSurrogate s;
        s.curvature = 1.0;
        s.expansion_point = Eigen::Vector2d(1.0, 1.0);
        // Unconstrained target (-1, 7).
        s.grad_z = -2.0 * (Eigen::Vector2d(-1.0, 7.0) - s.expansion_point);
        const Eigen::Vector2d next =
            user_position::update_user_position(s, Rect{0.0, 0.0, 2.0, 2.0});
        CHECK(next.x() == Approx(0.0));
        CHECK(next.y() == Approx(2.0));
    }
    SUBCASE("single receive path leaves the linear coefficient unchanged") {
        const auto s = oracles::pipeline_state(64, /*M=*/3, /*K=*/2, /*L=*/1);
        const auto& paths = s.scenario.geometry[0];
        const Eigen::MatrixXcd F = channel::field_response_matrix(
            s.positions.bs, paths, s.config.wavelength);
        const auto c = user_position::build_user_coefficients(F, paths.path_response,
                                                              s.W, 0, s.u[0]);
        const auto surrogate = user_position::build_user_surrogate(
            c, paths.dirs_rx, s.positions.users[0], s.config.wavelength);
        CHECK((surrogate.d_hat - c.d).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("descends the true per-user objective") {
        for (int rep = 0; rep < 30; ++rep) {
            const auto s = oracles::pipeline_state(5000 + rep);
            for (int k = 0; k < s.config.num_users; ++k) {
                const auto ku = static_cast<std::size_t>(k);
                const auto& paths = s.scenario.geometry[ku];
                const Eigen::MatrixXcd F = channel::field_response_matrix(
                    s.positions.bs, paths, s.config.wavelength);
                const Eigen::Vector2d r0 = s.positions.users[ku];
                const Eigen::Vector2d next = user_position::update_user_position(
                    paths, F, s.W, k, s.u[k], r0, s.config.rx_regions[ku],
                    s.config.wavelength);
                CHECK(s.config.rx_regions[ku].contains(next, 1e-12));

                const auto objective = [&](const Eigen::Vector2d& r) {
                    const auto h = oracles::naive_channel(s.positions.bs, r, paths,
                                                          s.config.wavelength);
                    return s.alpha[k] * s.v[k] *
                           oracles::naive_mse(h, s.W, k, s.u[k], s.config.noise_power);
                };
                CHECK(objective(next) <=
                      objective(r0) + 1e-9 * std::max(1.0, std::abs(objective(r0))));
            }
        }
    }
    SUBCASE("moving one user leaves the other users' error terms unchanged") {
        auto s = oracles::pipeline_state(65, /*M=*/4, /*K=*/3, /*L=*/3);
        const auto errors_before = [&] {
            std::vector<double> e;
            for (int k = 0; k < 3; ++k) {
                const auto h = oracles::naive_channel(
                    s.positions.bs, s.positions.users[static_cast<std::size_t>(k)],
                    s.scenario.geometry[static_cast<std::size_t>(k)],
                    s.config.wavelength);
                e.push_back(oracles::naive_mse(h, s.W, k, s.u[k], s.config.noise_power));
            }
            return e;
        };
        const auto before = errors_before();
        const auto& paths = s.scenario.geometry[1];
        const Eigen::MatrixXcd F = channel::field_response_matrix(
            s.positions.bs, paths, s.config.wavelength);
        s.positions.users[1] = user_position::update_user_position(
            paths, F, s.W, 1, s.u[1], s.positions.users[1], s.config.rx_regions[1],
            s.config.wavelength);
        const auto after = errors_before();
        CHECK(after[0] == before[0]);
        CHECK(after[2] == before[2]);
        CHECK(after[1] <= before[1] + 1e-12);
    }
    SUBCASE("gradient matches central finite differences") {
        Rng rng(66);
        const double step = 1e-6;
        for (int rep = 0; rep < 100; ++rep) {
            const auto s = oracles::pipeline_state(6000 + rep);
            const auto& paths = s.scenario.geometry[0];
            const Eigen::MatrixXcd F = channel::field_response_matrix(
                s.positions.bs, paths, s.config.wavelength);
            const auto c = user_position::build_user_coefficients(
                F, paths.path_response, s.W, 0, s.u[0]);
            // Generic expansion point; see the transmit-side gradient test.
            const Eigen::Vector2d r0{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
            const auto surrogate = user_position::build_user_surrogate(
                c, paths.dirs_rx, r0, s.config.wavelength);
            Eigen::Vector2d numeric;
            for (int d = 0; d < 2; ++d) {
                Eigen::Vector2d hi = r0, lo = r0;
                hi[d] += step;
                lo[d] -= step;
                numeric[d] =
                    (bs_position::linear_form_value(surrogate.d_hat, paths.dirs_rx, hi, 1.0) -
                     bs_position::linear_form_value(surrogate.d_hat, paths.dirs_rx, lo, 1.0)) /
                    (2.0 * step);
            }
            CHECK((surrogate.grad_z - numeric).norm() <=
                  1e-5 * std::max(numeric.norm(), 1e-8));
        }
    }
}
