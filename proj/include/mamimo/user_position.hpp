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

#include <Eigen/Core>

#include "mamimo/channel.hpp"
#include "mamimo/geometry.hpp"

namespace mamimo {

/// Coefficients and majorizer of the user-k objective restricted to its own
/// antenna position: g^H C g + Re(d^H g) + const over the receive region.
struct UserSurrogate {
    Eigen::MatrixXcd C;      ///< L_r x L_r, Hermitian PSD
    Eigen::VectorXcd d;      ///< L_r
    Eigen::VectorXcd d_hat;
    Eigen::Vector2d grad_z = Eigen::Vector2d::Zero();
    double curvature = 0.0;
    Eigen::Vector2d expansion_point = Eigen::Vector2d::Zero();
};

namespace user_position {

struct UserCoefficients {
    Eigen::MatrixXcd C;
    Eigen::VectorXcd d;
    double bound_scale = 0.0;  ///< sum_j |u_k|^2 ||Sigma^H F w_j||^2
};

/// C_k = sum_j |u_k|^2 Sigma_k^H F_k w_j w_j^H F_k^H Sigma_k and
/// d_k = -2 u_k^* Sigma_k^H F_k w_k. The positive factor alpha_k v_k common
/// to the whole per-user objective is dropped; it does not move the argmin.
UserCoefficients build_user_coefficients(const Eigen::MatrixXcd& F_k,
                                         const Eigen::MatrixXcd& path_response,
                                         const Eigen::MatrixXcd& W, int k,
                                         std::complex<double> u_k);

/// Majorizer at r_k_n with d_hat = 2 (C - bound_scale I) g(r_k_n) + d.
UserSurrogate build_user_surrogate(const UserCoefficients& coefficients,
                                   const Eigen::Matrix2Xd& dirs_rx,
                                   const Eigen::Vector2d& r_k_n, double wavelength);

/// Projected closed-form step
/// clamp(r0 - grad_z / (2 curvature)) onto the user's receive region.
/// Zero curvature returns the expansion point unchanged.
Eigen::Vector2d update_user_position(const UserSurrogate& surrogate, const Rect& region);

/// Convenience: coefficients, surrogate and projected step in one call.
Eigen::Vector2d update_user_position(const PathSet& paths, const Eigen::MatrixXcd& F_k,
                                     const Eigen::MatrixXcd& W, int k,
                                     std::complex<double> u_k,
                                     const Eigen::Vector2d& r_k_n, const Rect& region,
                                     double wavelength);

}  // namespace user_position
}  // namespace mamimo
