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

#include "mamimo/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mamimo/bs_position.hpp"
#include "mamimo/rng.hpp"
#include "mamimo/user_position.hpp"

namespace mamimo {

std::string to_string(BaselineKind baseline) {
    switch (baseline) {
        case BaselineKind::TMA_RMA: return "TMA-RMA";
        case BaselineKind::TFPA_RMA: return "TFPA-RMA";
        case BaselineKind::TMA_RFPA: return "TMA-RFPA";
        case BaselineKind::FPA: return "FPA";
    }
    return "FPA";
}

BaselineKind baseline_from_string(const std::string& s) {
    for (BaselineKind b : all_baselines())
        if (to_string(b) == s)
            return b;
    throw std::invalid_argument(
        "baseline: unknown name '" + s + "' (valid: TMA-RMA, TFPA-RMA, TMA-RFPA, FPA)");
}

bool baseline_moves_bs(BaselineKind baseline) {
    return baseline == BaselineKind::TMA_RMA || baseline == BaselineKind::TMA_RFPA;
}

bool baseline_moves_users(BaselineKind baseline) {
    return baseline == BaselineKind::TMA_RMA || baseline == BaselineKind::TFPA_RMA;
}

std::vector<BaselineKind> all_baselines() {
    return {BaselineKind::TMA_RMA, BaselineKind::TFPA_RMA, BaselineKind::TMA_RFPA,
            BaselineKind::FPA};
}

namespace driver {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

/// Channel bookkeeping kept in sync with the positions: per-user field
/// responses and the stacked channel matrix.
struct ChannelState {
    std::vector<Eigen::MatrixXcd> F;        // L_t x M per user
    std::vector<Eigen::VectorXcd> sigma_g;  // Sigma_k g_k(r_k)
    Eigen::MatrixXcd H;                     // M x K

    void rebuild(const Scenario& scenario, const PositionState& positions,
                 double wavelength) {
        const auto K = scenario.geometry.size();
        F.resize(K);
        sigma_g.resize(K);
        H.resize(static_cast<Eigen::Index>(positions.bs.size()),
                 static_cast<Eigen::Index>(K));
        for (std::size_t k = 0; k < K; ++k) {
            F[k] = channel::field_response_matrix(positions.bs, scenario.geometry[k],
                                                  wavelength);
            refresh_user(scenario, positions, wavelength, static_cast<int>(k));
        }
    }

    void refresh_user(const Scenario& scenario, const PositionState& positions,
                      double wavelength, int k) {
        const auto ku = static_cast<std::size_t>(k);
        const Eigen::VectorXcd g = channel::field_response_rx(
            positions.users[ku], scenario.geometry[ku], wavelength);
        sigma_g[ku] = scenario.geometry[ku].path_response * g;
        H.col(k) = F[ku].adjoint() * sigma_g[ku];
    }

    void refresh_antenna(const Scenario& scenario, const PositionState& positions,
                         double wavelength, int m) {
        for (std::size_t k = 0; k < scenario.geometry.size(); ++k) {
            F[k].col(m) = channel::field_response_tx(positions.bs[static_cast<std::size_t>(m)],
                                                     scenario.geometry[k], wavelength);
            H(m, static_cast<Eigen::Index>(k)) = F[k].col(m).dot(sigma_g[k]);
        }
    }
};

double min_pairwise_distance(const std::vector<Eigen::Vector2d>& points) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            lowest = std::min(lowest, (points[i] - points[j]).norm());
    return lowest;
}

double distance_residual(const ScenarioConfig& config,
                         const std::vector<Eigen::Vector2d>& bs) {
    if (bs.size() < 2)
        return 0.0;
    return std::max(0.0, config.min_distance - min_pairwise_distance(bs));
}

double region_residual(const ScenarioConfig& config, const PositionState& positions) {
    double worst = 0.0;
    for (std::size_t m = 0; m < positions.bs.size(); ++m) {
        const Rect& region = config.mode == MovementMode::planar
                                 ? config.planar_cells[m]
                                 : config.tx_region;
        worst = std::max(worst, (positions.bs[m] - region.clamp(positions.bs[m])).norm());
    }
    for (std::size_t k = 0; k < positions.users.size(); ++k)
        worst = std::max(
            worst, (positions.users[k] - config.rx_regions[k].clamp(positions.users[k])).norm());
    return worst;
}

void check_initial_feasibility(const ScenarioConfig& config,
                               const PositionState& positions) {
    constexpr double tol = 1e-9;
    if (positions.bs.size() != static_cast<std::size_t>(config.num_bs_antennas))
        throw std::invalid_argument("run_bcd: position count does not match config M");
    if (positions.users.size() != static_cast<std::size_t>(config.num_users))
        throw std::invalid_argument("run_bcd: user position count does not match config K");
    if (config.mode == MovementMode::general) {
        if (config.num_bs_antennas > 1 &&
            min_pairwise_distance(positions.bs) < config.min_distance - tol)
            throw std::invalid_argument("run_bcd: initial BS positions violate the minimum distance");
        for (const auto& t : positions.bs)
            if (!config.tx_region.contains(t, tol))
                throw std::invalid_argument("run_bcd: initial BS position outside tx_region");
    } else {
        for (std::size_t m = 0; m < positions.bs.size(); ++m)
            if (!config.planar_cells[m].contains(positions.bs[m], tol))
                throw std::invalid_argument("run_bcd: initial BS position outside its cell");
    }
    for (std::size_t k = 0; k < positions.users.size(); ++k)
        if (!config.rx_regions[k].contains(positions.users[k], tol))
            throw std::invalid_argument("run_bcd: initial user position outside its region");
}

Eigen::MatrixXcd initial_beamformers(const Eigen::MatrixXcd& H, double max_power) {
    const Eigen::Index M = H.rows();
    const Eigen::Index K = H.cols();
    Eigen::MatrixXcd W(M, K);
    const double per_user = std::sqrt(max_power / static_cast<double>(K));
    for (Eigen::Index k = 0; k < K; ++k) {
        const double norm = H.col(k).norm();
        if (norm > 0.0) {
            W.col(k) = per_user / norm * H.col(k);
        } else {
            W.col(k).setZero();
            W(k % M, k) = per_user;
        }
    }
    return W;
}

}  // namespace

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate out;
    out.count = static_cast<int>(values.size());
    if (values.empty())
        return out;
    // Canonical (sorted) summation order makes the result independent of the
    // order trials were executed in.
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double x : sorted)
        sum += x;
    out.mean = sum / static_cast<double>(sorted.size());
    if (sorted.size() > 1) {
        double ss = 0.0;
        for (double x : sorted)
            ss += (x - out.mean) * (x - out.mean);
        out.stddev = std::sqrt(ss / static_cast<double>(sorted.size() - 1));
    }
    return out;
}

RunReport run_bcd(const Scenario& scenario, const ScenarioConfig& config,
                  BaselineKind baseline, const DriverOptions& options) {
    if (scenario.geometry.size() != static_cast<std::size_t>(config.num_users))
        throw std::invalid_argument("run_bcd: geometry does not match config K");
    check_initial_feasibility(config, scenario.initial_positions);

    const double lambda = config.wavelength;
    const Eigen::VectorXd weights =
        Eigen::Map<const Eigen::VectorXd>(config.weights.data(),
                                          static_cast<Eigen::Index>(config.weights.size()));

    PositionState positions = scenario.initial_positions;
    ChannelState channel_state;
    channel_state.rebuild(scenario, positions, lambda);

    BeamformerState state;
    state.W = initial_beamformers(channel_state.H, config.max_power);
    state.u = beamforming::update_u(channel_state.H, state.W, config.noise_power);
    state.v = beamforming::update_v(channel_state.H, state.W, state.u);

    const bool move_bs = baseline_moves_bs(baseline);
    const bool move_users = baseline_moves_users(baseline);
    const int M = config.num_bs_antennas;
    const int K = config.num_users;

    RunReport report;
    const auto run_start = Clock::now();

    const auto objective_now = [&]() {
        return beamforming::evaluate_links(channel_state.H, state.W, state.u, state.v,
                                           weights, config.noise_power)
            .objective;
    };

    double previous_wsr = 0.0;
    int stall = 0;
    for (int iter = 0; iter < options.max_outer_iters; ++iter) {
        IterationRecord record;
        record.iteration = iter;

        // --- beamforming block -------------------------------------------
        auto block_start = Clock::now();
        for (int pass = 0; pass < options.wmmse_inner_iters; ++pass) {
            state.u = beamforming::update_u(channel_state.H, state.W, config.noise_power);
            state.v = beamforming::update_v(channel_state.H, state.W, state.u);
            state.W = beamforming::update_w(channel_state.H, state.u, state.v, weights,
                                            config.max_power, options.w_options)
                          .W;
        }
        record.beamforming_ms = elapsed_ms(block_start);
        record.objective_after_beamforming = objective_now();

        // --- BS position block -------------------------------------------
        block_start = Clock::now();
        double block_distance_residual = 0.0;
        if (move_bs) {
            std::vector<PositionSurrogate> surrogates(static_cast<std::size_t>(K));
            for (int step = 0; step < options.bs_inner_steps; ++step) {
                for (int m = 0; m < M; ++m) {
                    const Eigen::Vector2d t0 = positions.bs[static_cast<std::size_t>(m)];
                    for (int k = 0; k < K; ++k) {
                        const auto ku = static_cast<std::size_t>(k);
                        const PositionCoefficients coefficients =
                            bs_position::build_coefficients(
                                channel_state.F[ku], channel_state.sigma_g[ku], state.W,
                                k, m, state.u[k], state.v[k], weights[k]);
                        surrogates[ku] = bs_position::build_surrogate(
                            coefficients, scenario.geometry[ku].dirs_tx, t0, lambda);
                    }
                    if (config.mode == MovementMode::general) {
                        const auto updated = bs_position::update_position_general(
                            m, surrogates, positions.bs, config.min_distance,
                            config.tx_region, lambda);
                        positions.bs[static_cast<std::size_t>(m)] = updated.position;
                        ++report.qp_solve_count;
                        if (!updated.qp_converged)
                            ++report.qp_nonconverged_count;
                    } else {
                        positions.bs[static_cast<std::size_t>(m)] =
                            bs_position::update_position_planar(
                                surrogates, t0,
                                config.planar_cells[static_cast<std::size_t>(m)]);
                    }
                    channel_state.refresh_antenna(scenario, positions, lambda, m);
                    if (options.strict_feasibility_checks) {
                        block_distance_residual = std::max(
                            block_distance_residual, distance_residual(config, positions.bs));
                        record.region_residual = std::max(
                            record.region_residual, region_residual(config, positions));
                    }
                }
            }
        }
        record.bs_position_ms = elapsed_ms(block_start);
        record.objective_after_bs_block = objective_now();

        // --- user position block -----------------------------------------
        block_start = Clock::now();
        if (move_users) {
            for (int k = 0; k < K; ++k) {
                const auto ku = static_cast<std::size_t>(k);
                positions.users[ku] = user_position::update_user_position(
                    scenario.geometry[ku], channel_state.F[ku], state.W, k, state.u[k],
                    positions.users[ku], config.rx_regions[ku], lambda);
                channel_state.refresh_user(scenario, positions, lambda, k);
            }
        }
        record.user_position_ms = elapsed_ms(block_start);
        record.objective_after_user_block = objective_now();

        // --- refresh and record ------------------------------------------
        state.u = beamforming::update_u(channel_state.H, state.W, config.noise_power);
        state.v = beamforming::update_v(channel_state.H, state.W, state.u);
        const LinkMetrics metrics = beamforming::evaluate_links(
            channel_state.H, state.W, state.u, state.v, weights, config.noise_power);
        record.objective = metrics.objective;
        record.wsr_nats = metrics.wsr_nats;
        record.max_distance_residual =
            std::max(block_distance_residual, distance_residual(config, positions.bs));
        record.region_residual =
            std::max(record.region_residual, region_residual(config, positions));
        record.power_residual =
            std::max(0.0, beamforming::transmit_power(state.W) - config.max_power);
        report.iterations.push_back(record);

        if (!std::isfinite(metrics.objective) || !std::isfinite(metrics.wsr_nats))
            throw std::runtime_error("run_bcd: objective is not finite");

        if (iter > 0 &&
            std::abs(metrics.wsr_nats - previous_wsr) <
                options.wsr_tol_rel * std::max(std::abs(metrics.wsr_nats), 1e-300)) {
            ++stall;
        } else {
            stall = 0;
        }
        previous_wsr = metrics.wsr_nats;
        if (stall >= options.patience) {
            report.converged = true;
            break;
        }
    }

    report.final_positions = positions;
    report.final_beamformers = state;
    report.total_ms = elapsed_ms(run_start);
    return report;
}

MonteCarloReport run_monte_carlo(const ScenarioConfig& config,
                                 const std::vector<BaselineKind>& baselines,
                                 int trials, const DriverOptions& options) {
    if (trials < 1)
        throw std::invalid_argument("run_monte_carlo: trials must be >= 1");

    MonteCarloReport report;
    report.trials.reserve(static_cast<std::size_t>(trials) * baselines.size());

    for (int trial = 0; trial < trials; ++trial) {
        ScenarioConfig trial_config = config;
        trial_config.rng_seed =
            Rng::derive_seed(config.rng_seed, static_cast<std::uint64_t>(trial));
        const Scenario scenario = channel::generate_scenario(trial_config);
        for (BaselineKind baseline : baselines) {
            const RunReport run = run_bcd(scenario, trial_config, baseline, options);
            TrialResult result;
            result.trial = trial;
            result.baseline = baseline;
            result.final_wsr_nats = run.final_wsr_nats();
            result.iterations = static_cast<int>(run.iterations.size());
            result.converged = run.converged;
            result.total_ms = run.total_ms;
            double bs_ms = 0.0;
            int counted = 0;
            for (const auto& rec : run.iterations)
                if (rec.iteration > 0) {  // warm-up iteration excluded
                    bs_ms += rec.bs_position_ms;
                    ++counted;
                }
            result.mean_bs_block_ms = counted > 0 ? bs_ms / counted : 0.0;
            report.trials.push_back(result);
        }
    }

    for (BaselineKind baseline : baselines) {
        BaselineSummary summary;
        summary.baseline = baseline;
        std::vector<double> wsr, total_ms, bs_ms, iters;
        for (const TrialResult& t : report.trials) {
            if (t.baseline != baseline)
                continue;
            wsr.push_back(t.final_wsr_nats);
            total_ms.push_back(t.total_ms);
            bs_ms.push_back(t.mean_bs_block_ms);
            iters.push_back(static_cast<double>(t.iterations));
            if (t.converged)
                ++summary.converged_trials;
        }
        summary.final_wsr_nats = aggregate(wsr);
        summary.total_ms = aggregate(total_ms);
        summary.mean_bs_block_ms = aggregate(bs_ms);
        summary.iterations = aggregate(iters);
        report.summaries.push_back(summary);
    }
    return report;
}

}  // namespace driver
}  // namespace mamimo
