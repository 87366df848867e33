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

#include "mamimo/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "mamimo/rng.hpp"

namespace mamimo::channel {

namespace {

void check_paths(const PathSet& paths) {
    if (paths.path_response.rows() != paths.dirs_tx.cols() ||
        paths.path_response.cols() != paths.dirs_rx.cols())
        throw std::invalid_argument(
            "path_response: shape does not match the path counts");
}

}  // namespace

Eigen::Vector2d direction_vector(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::cos(theta)};
}

Eigen::VectorXcd field_response(const Eigen::Matrix2Xd& dirs,
                                const Eigen::Vector2d& position, double wavelength) {
    const double wave_number = 2.0 * M_PI / wavelength;
    Eigen::VectorXcd out(dirs.cols());
    for (Eigen::Index l = 0; l < dirs.cols(); ++l) {
        const double phase = wave_number * position.dot(dirs.col(l));
        out[l] = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return out;
}

Eigen::VectorXcd field_response_tx(const Eigen::Vector2d& t_m, const PathSet& paths,
                                   double wavelength) {
    return field_response(paths.dirs_tx, t_m, wavelength);
}

Eigen::VectorXcd field_response_rx(const Eigen::Vector2d& r_k, const PathSet& paths,
                                   double wavelength) {
    return field_response(paths.dirs_rx, r_k, wavelength);
}

Eigen::MatrixXcd field_response_matrix(std::span<const Eigen::Vector2d> bs_positions,
                                       const PathSet& paths, double wavelength) {
    Eigen::MatrixXcd F(paths.num_tx_paths(), static_cast<Eigen::Index>(bs_positions.size()));
    for (std::size_t m = 0; m < bs_positions.size(); ++m)
        F.col(static_cast<Eigen::Index>(m)) =
            field_response_tx(bs_positions[m], paths, wavelength);
    return F;
}

Eigen::VectorXcd assemble_channel(std::span<const Eigen::Vector2d> bs_positions,
                                  const Eigen::Vector2d& r_k, const PathSet& paths,
                                  double wavelength) {
    check_paths(paths);
    const Eigen::MatrixXcd F = field_response_matrix(bs_positions, paths, wavelength);
    const Eigen::VectorXcd g = field_response_rx(r_k, paths, wavelength);
    return F.adjoint() * (paths.path_response * g);
}

Eigen::MatrixXcd assemble_channel_matrix(const PositionState& positions,
                                         const ChannelGeometry& geometry,
                                         double wavelength) {
    const auto M = static_cast<Eigen::Index>(positions.bs.size());
    const auto K = static_cast<Eigen::Index>(geometry.size());
    Eigen::MatrixXcd H(M, K);
    for (Eigen::Index k = 0; k < K; ++k)
        H.col(k) = assemble_channel(positions.bs,
                                    positions.users[static_cast<std::size_t>(k)],
                                    geometry[static_cast<std::size_t>(k)], wavelength);
    return H;
}

std::vector<Eigen::Vector2d> initial_bs_positions(const ScenarioConfig& config) {
    std::vector<Eigen::Vector2d> positions;
    positions.reserve(static_cast<std::size_t>(config.num_bs_antennas));

    if (config.mode == MovementMode::planar) {
        for (const Rect& cell : config.planar_cells)
            positions.push_back(cell.center());
        return positions;
    }

    const Rect& region = config.tx_region;
    const GridLayout layout =
        feasible_grid_layout(config.num_bs_antennas, region, config.min_distance);
    // Spread the grid across the whole region; the layout guarantees the
    // resulting spacing is at least the minimum distance on each axis.
    const double step_x = layout.cols > 1 ? region.width() / (layout.cols - 1) : 0.0;
    const double step_y = layout.rows > 1 ? region.height() / (layout.rows - 1) : 0.0;
    for (int i = 0; i < config.num_bs_antennas; ++i) {
        const int col = i % layout.cols;
        const int row = i / layout.cols;
        const double x = layout.cols > 1 ? region.xmin + col * step_x : region.center().x();
        const double y = layout.rows > 1 ? region.ymin + row * step_y : region.center().y();
        positions.emplace_back(x, y);
    }
    return positions;
}

Scenario generate_scenario(const ScenarioConfig& config) {
    ScenarioConfig checked = config;
    validate_config(checked);

    Rng rng(checked.rng_seed);
    Scenario scenario;
    scenario.geometry.reserve(static_cast<std::size_t>(checked.num_users));

    for (int k = 0; k < checked.num_users; ++k) {
        const int lt = checked.tx_paths(k);
        const int lr = checked.rx_paths(k);
        PathSet paths;
        paths.theta_tx.resize(lt);
        paths.phi_tx.resize(lt);
        paths.theta_rx.resize(lr);
        paths.phi_rx.resize(lr);
        paths.dirs_tx.resize(2, lt);
        paths.dirs_rx.resize(2, lr);
        for (int l = 0; l < lt; ++l) {
            paths.theta_tx[l] = rng.uniform(checked.angle_min, checked.angle_max);
            paths.phi_tx[l] = rng.uniform(checked.angle_min, checked.angle_max);
            paths.dirs_tx.col(l) = direction_vector(paths.theta_tx[l], paths.phi_tx[l]);
        }
        for (int l = 0; l < lr; ++l) {
            paths.theta_rx[l] = rng.uniform(checked.angle_min, checked.angle_max);
            paths.phi_rx[l] = rng.uniform(checked.angle_min, checked.angle_max);
            paths.dirs_rx.col(l) = direction_vector(paths.theta_rx[l], paths.phi_rx[l]);
        }
        const double variance = checked.path_variance(k);
        paths.path_response.resize(lt, lr);
        for (int i = 0; i < lt; ++i)
            for (int j = 0; j < lr; ++j)
                paths.path_response(i, j) = rng.complex_normal(variance);
        scenario.geometry.push_back(std::move(paths));
    }

    auto& positions = scenario.initial_positions;
    positions.bs = initial_bs_positions(checked);

    if (checked.random_initial_positions && checked.mode == MovementMode::general) {
        // Seeded rejection sampling; keep the grid if spacing never works out.
        std::vector<Eigen::Vector2d> sampled;
        for (int attempt = 0; attempt < 2000 &&
                              sampled.size() < positions.bs.size();
             ++attempt) {
            Eigen::Vector2d candidate{
                rng.uniform(checked.tx_region.xmin, checked.tx_region.xmax),
                rng.uniform(checked.tx_region.ymin, checked.tx_region.ymax)};
            bool ok = true;
            for (const auto& p : sampled)
                if ((candidate - p).norm() < checked.min_distance) {
                    ok = false;
                    break;
                }
            if (ok)
                sampled.push_back(candidate);
        }
        if (sampled.size() == positions.bs.size())
            positions.bs = std::move(sampled);
    }

    positions.users.reserve(static_cast<std::size_t>(checked.num_users));
    for (const Rect& r : checked.rx_regions)
        positions.users.push_back(r.center());

    return scenario;
}

}  // namespace mamimo::channel
