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

#include "mamimo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/LU>

#include "mamimo/bs_position.hpp"
#include "mamimo/channel.hpp"
#include "mamimo/driver.hpp"
#include "mamimo/qp.hpp"
#include "mamimo/rng.hpp"
#include "mamimo/user_position.hpp"

namespace mamimo::verify {

namespace {

void note_failure(SuiteResult& result, const std::string& message) {
    ++result.failed;
    if (result.failures.size() < 8)
        result.failures.push_back(message);
}

void check(SuiteResult& result, bool ok, const std::string& message) {
    if (ok)
        ++result.passed;
    else
        note_failure(result, message);
}

Eigen::VectorXcd random_complex_vector(Rng& rng, int n, double scale = 1.0) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i)
        v[i] = rng.complex_normal(scale);
    return v;
}

ScenarioConfig small_config(std::uint64_t seed) {
    ScenarioConfig config;
    config.num_bs_antennas = 4;
    config.num_users = 2;
    config.num_tx_paths = {3, 3};
    config.num_rx_paths = {3, 3};
    config.rng_seed = seed;
    return config;
}

/// A state a few WMMSE passes into a run, so coefficients carry realistic
/// magnitudes.
struct SampleState {
    ScenarioConfig config;
    Scenario scenario;
    PositionState positions;
    Eigen::MatrixXcd H;
    BeamformerState state;
    Eigen::VectorXd weights;
};

SampleState make_sample_state(std::uint64_t seed) {
    SampleState sample;
    sample.config = small_config(seed);
    validate_config(sample.config);
    sample.scenario = channel::generate_scenario(sample.config);
    sample.positions = sample.scenario.initial_positions;
    sample.H = channel::assemble_channel_matrix(sample.positions, sample.scenario.geometry,
                                                sample.config.wavelength);
    sample.weights = Eigen::VectorXd::Ones(sample.config.num_users);

    Rng rng(Rng::derive_seed(seed, 17));
    Eigen::MatrixXcd W(sample.config.num_bs_antennas, sample.config.num_users);
    for (Eigen::Index k = 0; k < W.cols(); ++k)
        W.col(k) = random_complex_vector(rng, sample.config.num_bs_antennas);
    W *= std::sqrt(sample.config.max_power) / std::sqrt(W.cwiseAbs2().sum());

    sample.state.W = W;
    for (int pass = 0; pass < 3; ++pass) {
        sample.state.u = beamforming::update_u(sample.H, sample.state.W,
                                               sample.config.noise_power);
        sample.state.v = beamforming::update_v(sample.H, sample.state.W, sample.state.u);
        sample.state.W = beamforming::update_w(sample.H, sample.state.u, sample.state.v,
                                               sample.weights, sample.config.max_power)
                             .W;
    }
    return sample;
}

}  // namespace

SuiteResult run_surrogate_suite(int samples, std::uint64_t seed) {
    SuiteResult result;
    result.name = "surrogate-majorization";
    Rng rng(seed);

    for (int i = 0; i < samples; ++i) {
        // Quadratic-form bound on a random Hermitian form with the scaled
        // identity that the surrogate construction uses.
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
        const Eigen::VectorXcd a = random_complex_vector(rng, n);
        const double c = std::exp(rng.uniform(-1.0, 1.0));
        const Eigen::MatrixXcd L = c * (a * a.adjoint());
        const Eigen::MatrixXcd M =
            c * a.squaredNorm() * Eigen::MatrixXcd::Identity(n, n);
        const Eigen::VectorXcd x = random_complex_vector(rng, n);
        const Eigen::VectorXcd x0 = random_complex_vector(rng, n);
        const double truth = std::real((x.adjoint() * L * x).value());
        const double bound = bs_position::quadratic_form_upper_bound(L, M, x, x0);
        check(result, bound - truth >= -1e-9, "quadratic bound fell below the form");
        const double at_x0 = bs_position::quadratic_form_upper_bound(L, M, x0, x0);
        const double truth0 = std::real((x0.adjoint() * L * x0).value());
        check(result, std::abs(at_x0 - truth0) <= 1e-9, "quadratic bound not tight at x0");

        // Linear-form sandwich over random positions.
        Eigen::Matrix2Xd dirs(2, n);
        for (int l = 0; l < n; ++l)
            dirs.col(l) =
                channel::direction_vector(rng.uniform(0.0, M_PI), rng.uniform(0.0, M_PI));
        const Eigen::VectorXcd b = random_complex_vector(rng, n);
        const Eigen::Vector2d t0{rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0)};
        const Eigen::Vector2d t{rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0)};
        const double z = bs_position::linear_form_value(b, dirs, t, 1.0);
        const auto bounds = bs_position::linear_form_bounds(b, dirs, t, t0, 1.0);
        check(result, bounds.lower - 1e-9 <= z && z <= bounds.upper + 1e-9,
              "linear-form sandwich violated");
    }

    // Surrogate majorization/tightness on states drawn from the pipeline.
    const int state_checks = std::max(1, samples / 10);
    for (int i = 0; i < state_checks; ++i) {
        const SampleState sample = make_sample_state(Rng::derive_seed(seed, 100 + i));
        Rng local(Rng::derive_seed(seed, 200 + i));
        const int k = static_cast<int>(local.uniform(0.0, sample.config.num_users));
        const int m = static_cast<int>(local.uniform(0.0, sample.config.num_bs_antennas));
        const auto& paths = sample.scenario.geometry[static_cast<std::size_t>(k)];
        const Eigen::MatrixXcd F = channel::field_response_matrix(
            sample.positions.bs, paths, sample.config.wavelength);
        const Eigen::VectorXcd g = channel::field_response_rx(
            sample.positions.users[static_cast<std::size_t>(k)], paths,
            sample.config.wavelength);
        const Eigen::VectorXcd sigma_g = paths.path_response * g;
        const auto coefficients = bs_position::build_coefficients(
            F, sigma_g, sample.state.W, k, m, sample.state.u[k], sample.state.v[k],
            sample.weights[k]);
        const Eigen::Vector2d t0 = sample.positions.bs[static_cast<std::size_t>(m)];
        const auto surrogate = bs_position::build_surrogate(coefficients, paths.dirs_tx,
                                                            t0, sample.config.wavelength);

        const auto truth = [&](const Eigen::Vector2d& t) {
            const Eigen::VectorXcd f =
                channel::field_response(paths.dirs_tx, t, sample.config.wavelength);
            return std::real((f.adjoint() * coefficients.A * f).value()) +
                   std::real(coefficients.b.dot(f));
        };
        const auto quadratic = [&](const Eigen::Vector2d& t) {
            return surrogate.curvature * t.squaredNorm() +
                   (surrogate.grad_z - 2.0 * surrogate.curvature * t0).dot(t);
        };
        const double offset = quadratic(t0) - truth(t0);
        for (int s = 0; s < 10; ++s) {
            const Eigen::Vector2d t{local.uniform(0.0, 5.0), local.uniform(0.0, 5.0)};
            const double gap = quadratic(t) - offset - truth(t);
            check(result, gap >= -1e-9 * std::max(1.0, std::abs(truth(t))),
                  "position surrogate fell below the objective");
        }
    }
    return result;
}

SuiteResult run_gradient_suite(int samples, std::uint64_t seed) {
    SuiteResult result;
    result.name = "gradient-check";
    Rng rng(seed);
    const double wavelength = 1.0;
    const double step = 1e-6 * wavelength;

    for (int i = 0; i < samples; ++i) {
        const int n = 2 + static_cast<int>(rng.uniform(0.0, 4.0));
        Eigen::Matrix2Xd dirs(2, n);
        for (int l = 0; l < n; ++l)
            dirs.col(l) =
                channel::direction_vector(rng.uniform(0.0, M_PI), rng.uniform(0.0, M_PI));
        const Eigen::VectorXcd b = random_complex_vector(rng, n);
        const Eigen::Vector2d t0{rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0)};

        const Eigen::Vector2d analytic =
            bs_position::linear_form_gradient(b, dirs, t0, wavelength);
        Eigen::Vector2d numeric;
        for (int d = 0; d < 2; ++d) {
            Eigen::Vector2d hi = t0, lo = t0;
            hi[d] += step;
            lo[d] -= step;
            numeric[d] = (bs_position::linear_form_value(b, dirs, hi, wavelength) -
                          bs_position::linear_form_value(b, dirs, lo, wavelength)) /
                         (2.0 * step);
        }
        const double rel =
            (analytic - numeric).norm() / std::max(numeric.norm(), 1e-8);
        std::ostringstream msg;
        msg << "gradient mismatch: rel error " << rel;
        check(result, rel <= 1e-5, msg.str());
    }
    return result;
}

SuiteResult run_monotonicity_suite(int samples, std::uint64_t seed) {
    SuiteResult result;
    result.name = "monotonicity";
    for (int i = 0; i < samples; ++i) {
        ScenarioConfig config = small_config(Rng::derive_seed(seed, i));
        validate_config(config);
        const Scenario scenario = channel::generate_scenario(config);
        driver::DriverOptions options;
        options.max_outer_iters = 25;
        const auto report =
            driver::run_bcd(scenario, config, BaselineKind::TMA_RMA, options);

        bool objective_ok = true;
        bool wsr_ok = true;
        double previous = std::numeric_limits<double>::infinity();
        double previous_wsr = -std::numeric_limits<double>::infinity();
        for (const auto& it : report.iterations) {
            const double slack = 1e-9 * std::max(1.0, std::abs(previous));
            objective_ok &= it.objective_after_beamforming <= previous + slack;
            objective_ok &= it.objective_after_bs_block <=
                            it.objective_after_beamforming + slack;
            objective_ok &=
                it.objective_after_user_block <= it.objective_after_bs_block + slack;
            objective_ok &= it.objective <= it.objective_after_user_block + slack;
            previous = it.objective;
            wsr_ok &= it.wsr_nats >= previous_wsr - 1e-8 * std::abs(it.wsr_nats);
            previous_wsr = it.wsr_nats;
        }
        check(result, objective_ok, "objective increased across a block");
        check(result, wsr_ok, "sum rate decreased across an iteration");
    }
    return result;
}

SuiteResult run_qp_suite(int samples, std::uint64_t seed) {
    SuiteResult result;
    result.name = "qp-oracle";
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        qp::QpProblem problem;
        problem.curvature = std::exp(rng.uniform(-1.0, 2.0));
        problem.gradient = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        problem.box = Rect{-4.0, -4.0, 4.0, 4.0};
        const Eigen::Vector2d start{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        const int n = static_cast<int>(rng.uniform(0.0, 16.0));
        for (int c = 0; c < n; ++c) {
            const double angle = rng.uniform(0.0, 2.0 * M_PI);
            const Eigen::Vector2d normal{std::cos(angle), std::sin(angle)};
            problem.constraints.push_back(
                {normal, normal.dot(start) - rng.uniform(0.0, 3.0)});
        }

        const auto solved = qp::solve(problem, start);
        // Independent check: best feasible candidate over every active set.
        double best = problem.objective(start);
        const auto consider = [&](const Eigen::Vector2d& x) {
            for (const auto& h : problem.constraints)
                if (h.residual(x) < -1e-9 * std::max(1.0, h.normal.norm()))
                    return;
            if (!problem.box.contains(x, 1e-9))
                return;
            best = std::min(best, problem.objective(x));
        };
        std::vector<std::pair<Eigen::Vector2d, double>> lines;
        for (const auto& h : problem.constraints)
            lines.emplace_back(h.normal / h.normal.norm(), h.offset / h.normal.norm());
        lines.push_back({{1.0, 0.0}, problem.box.xmin});
        lines.push_back({{-1.0, 0.0}, -problem.box.xmax});
        lines.push_back({{0.0, 1.0}, problem.box.ymin});
        lines.push_back({{0.0, -1.0}, -problem.box.ymax});
        const Eigen::Vector2d center = -problem.gradient / (2.0 * problem.curvature);
        consider(center);
        for (std::size_t a = 0; a < lines.size(); ++a) {
            consider(center + (lines[a].second - lines[a].first.dot(center)) * lines[a].first);
            for (std::size_t c = a + 1; c < lines.size(); ++c) {
                Eigen::Matrix2d A;
                A.row(0) = lines[a].first.transpose();
                A.row(1) = lines[c].first.transpose();
                if (std::abs(A.determinant()) < 1e-12)
                    continue;
                consider(A.inverse() * Eigen::Vector2d(lines[a].second, lines[c].second));
            }
        }
        std::ostringstream msg;
        msg << "qp objective " << problem.objective(solved.x) << " vs oracle " << best;
        check(result, problem.objective(solved.x) <= best + 1e-8, msg.str());
    }
    return result;
}

SuiteResult run_grid_suite(int samples, std::uint64_t seed) {
    SuiteResult result;
    result.name = "grid-oracle";
    for (int i = 0; i < samples; ++i) {
        ScenarioConfig config;
        config.num_bs_antennas = 1;
        config.num_users = 1;
        config.num_tx_paths = {2};
        config.num_rx_paths = {2};
        config.rng_seed = Rng::derive_seed(seed, i);
        validate_config(config);
        const Scenario scenario = channel::generate_scenario(config);
        const auto& paths = scenario.geometry[0];

        PositionState positions = scenario.initial_positions;
        Eigen::MatrixXcd H = channel::assemble_channel_matrix(positions, scenario.geometry,
                                                              config.wavelength);
        BeamformerState state;
        state.W = Eigen::MatrixXcd::Zero(1, 1);
        state.W(0, 0) = std::sqrt(config.max_power);
        state.u = beamforming::update_u(H, state.W, config.noise_power);
        state.v = beamforming::update_v(H, state.W, state.u);

        const Eigen::VectorXcd g =
            channel::field_response_rx(positions.users[0], paths, config.wavelength);
        const Eigen::VectorXcd sigma_g = paths.path_response * g;
        const auto objective = [&](const Eigen::Vector2d& t) {
            const Eigen::MatrixXcd F = channel::field_response_matrix(
                std::span<const Eigen::Vector2d>(&t, 1), paths, config.wavelength);
            const auto coefficients = bs_position::build_coefficients(
                F, sigma_g, state.W, 0, 0, state.u[0], state.v[0], 1.0);
            const Eigen::VectorXcd f = F.col(0);
            return std::real((f.adjoint() * coefficients.A * f).value()) +
                   std::real(coefficients.b.dot(f));
        };

        // Dense reference grid over the whole region.
        const int grid_n = 201;
        double best_value = std::numeric_limits<double>::infinity();
        Eigen::Vector2d best_point = positions.bs[0];
        for (int gx = 0; gx < grid_n; ++gx)
            for (int gy = 0; gy < grid_n; ++gy) {
                const Eigen::Vector2d t{
                    config.tx_region.xmin + config.tx_region.width() * gx / (grid_n - 1),
                    config.tx_region.ymin + config.tx_region.height() * gy / (grid_n - 1)};
                const double value = objective(t);
                if (value < best_value) {
                    best_value = value;
                    best_point = t;
                }
            }

        // Descend with the position update from the best grid cell.
        Eigen::Vector2d t = best_point;
        for (int it = 0; it < 200; ++it) {
            const Eigen::MatrixXcd F = channel::field_response_matrix(
                std::span<const Eigen::Vector2d>(&t, 1), paths, config.wavelength);
            const auto coefficients = bs_position::build_coefficients(
                F, sigma_g, state.W, 0, 0, state.u[0], state.v[0], 1.0);
            std::vector<PositionSurrogate> surrogates{bs_position::build_surrogate(
                coefficients, paths.dirs_tx, t, config.wavelength)};
            const Eigen::Vector2d next =
                bs_position::update_position_planar(surrogates, t, config.tx_region);
            if ((next - t).norm() < 1e-12)
                break;
            t = next;
        }
        std::ostringstream msg;
        msg << "descent value " << objective(t) << " vs grid best " << best_value;
        check(result, objective(t) <= best_value + 1e-3, msg.str());
    }
    return result;
}

std::vector<std::string> suite_names() {
    return {"surrogate-majorization", "gradient-check", "monotonicity", "qp-oracle",
            "grid-oracle"};
}

std::vector<SuiteResult> run_suites(const std::string& name, int samples,
                                    std::uint64_t seed) {
    const auto matches = [&](const std::string& full, const std::string& alias) {
        return name == full || name == alias;
    };
    if (name == "all") {
        return {run_surrogate_suite(samples, seed), run_gradient_suite(samples, seed),
                run_monotonicity_suite(std::max(1, samples / 50), seed),
                run_qp_suite(samples, seed), run_grid_suite(std::max(1, samples / 50), seed)};
    }
    if (matches("surrogate-majorization", "surrogate"))
        return {run_surrogate_suite(samples, seed)};
    if (matches("gradient-check", "gradient"))
        return {run_gradient_suite(samples, seed)};
    if (matches("monotonicity", "monotone"))
        return {run_monotonicity_suite(samples, seed)};
    if (matches("qp-oracle", "qp"))
        return {run_qp_suite(samples, seed)};
    if (matches("grid-oracle", "grid"))
        return {run_grid_suite(samples, seed)};

    std::string valid = "all";
    for (const auto& n : suite_names())
        valid += ", " + n;
    throw std::invalid_argument("suite: unknown name '" + name + "' (valid: " + valid + ")");
}

}  // namespace mamimo::verify
