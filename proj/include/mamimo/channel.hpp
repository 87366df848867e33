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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mamimo/scenario.hpp"

namespace mamimo {

/// Multipath geometry for one user: angles, direction vectors and the
/// path-response matrix coupling transmit and receive paths.
struct PathSet {
    Eigen::VectorXd theta_tx, phi_tx;  ///< elevation/azimuth per transmit path
    Eigen::VectorXd theta_rx, phi_rx;  ///< elevation/azimuth per receive path
    Eigen::Matrix2Xd dirs_tx;          ///< column l: n = (sin th cos ph, cos th)
    Eigen::Matrix2Xd dirs_rx;
    Eigen::MatrixXcd path_response;    ///< Sigma, L_t x L_r

    int num_tx_paths() const { return static_cast<int>(dirs_tx.cols()); }
    int num_rx_paths() const { return static_cast<int>(dirs_rx.cols()); }
};

/// Per-user path geometry for the whole scenario.
using ChannelGeometry = std::vector<PathSet>;

/// Antenna positions: M base-station points and K user points.
struct PositionState {
    std::vector<Eigen::Vector2d> bs;
    std::vector<Eigen::Vector2d> users;
};

/// A generated scenario: geometry plus the feasible initial positions.
struct Scenario {
    ChannelGeometry geometry;
    PositionState initial_positions;
};

namespace channel {

/// n = (sin(theta) cos(phi), cos(theta)).
Eigen::Vector2d direction_vector(double theta, double phi);

/// Per-path phase factors exp(j 2 pi / lambda * pos . n_l) for the given
/// direction columns. Every entry has unit modulus.
Eigen::VectorXcd field_response(const Eigen::Matrix2Xd& dirs,
                                const Eigen::Vector2d& position, double wavelength);

/// Transmit-side field-response vector f_k(t_m), length L_t.
Eigen::VectorXcd field_response_tx(const Eigen::Vector2d& t_m, const PathSet& paths,
                                   double wavelength);

/// Receive-side field-response vector g_k(r_k), length L_r.
Eigen::VectorXcd field_response_rx(const Eigen::Vector2d& r_k, const PathSet& paths,
                                   double wavelength);

/// Field-response matrix F_k = (f_k(t_1), ..., f_k(t_M)), L_t x M.
Eigen::MatrixXcd field_response_matrix(std::span<const Eigen::Vector2d> bs_positions,
                                       const PathSet& paths, double wavelength);

/// Channel vector h_k = F_k(t)^H Sigma_k g_k(r_k), length M. Throws on a
/// shape mismatch between Sigma and the path counts.
Eigen::VectorXcd assemble_channel(std::span<const Eigen::Vector2d> bs_positions,
                                  const Eigen::Vector2d& r_k, const PathSet& paths,
                                  double wavelength);

/// All K channel vectors as columns of an M x K matrix.
Eigen::MatrixXcd assemble_channel_matrix(const PositionState& positions,
                                         const ChannelGeometry& geometry,
                                         double wavelength);

/// Draws angles and path-response matrices and places the initial antenna
/// positions. Deterministic for a given config (seed included); throws
/// std::invalid_argument on an invalid or geometrically infeasible config.
Scenario generate_scenario(const ScenarioConfig& config);

/// Deterministic spacing-feasible initial BS positions (grid in general
/// mode, cell centers in planar mode).
std::vector<Eigen::Vector2d> initial_bs_positions(const ScenarioConfig& config);

}  // namespace channel
}  // namespace mamimo
