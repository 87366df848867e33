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

#include "mamimo/user_position.hpp"

#include <cmath>
#include <stdexcept>

#include "mamimo/bs_position.hpp"

namespace mamimo::user_position {

UserCoefficients build_user_coefficients(const Eigen::MatrixXcd& F_k,
                                         const Eigen::MatrixXcd& path_response,
                                         const Eigen::MatrixXcd& W, int k,
                                         std::complex<double> u_k) {
    if (path_response.rows() != F_k.rows())
        throw std::invalid_argument("build_user_coefficients: Sigma and F disagree on L_t");
    if (F_k.cols() != W.rows())
        throw std::invalid_argument("build_user_coefficients: F and W disagree on M");

    const Eigen::Index lr = path_response.cols();
    const double u_sq = std::norm(u_k);

    UserCoefficients out;
    out.C = Eigen::MatrixXcd::Zero(lr, lr);
    out.bound_scale = 0.0;
    // q_j = Sigma^H F w_j couples beamformer j into the receive paths.
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
        const Eigen::VectorXcd q = path_response.adjoint() * (F_k * W.col(j));
        out.C.noalias() += u_sq * (q * q.adjoint());
        out.bound_scale += u_sq * q.squaredNorm();
    }
    out.d = -2.0 * std::conj(u_k) * (path_response.adjoint() * (F_k * W.col(k)));
    return out;
}

UserSurrogate build_user_surrogate(const UserCoefficients& coefficients,
                                   const Eigen::Matrix2Xd& dirs_rx,
                                   const Eigen::Vector2d& r_k_n, double wavelength) {
    UserSurrogate s;
    s.C = coefficients.C;
    s.d = coefficients.d;
    s.expansion_point = r_k_n;

    const Eigen::VectorXcd g0 = channel::field_response(dirs_rx, r_k_n, wavelength);
    s.d_hat = 2.0 * (coefficients.C * g0 - coefficients.bound_scale * g0) + coefficients.d;
    s.grad_z = bs_position::linear_form_gradient(s.d_hat, dirs_rx, r_k_n, wavelength);
    s.curvature =
        4.0 * M_PI * M_PI / (wavelength * wavelength) * s.d_hat.cwiseAbs().sum();
    return s;
}

Eigen::Vector2d update_user_position(const UserSurrogate& surrogate, const Rect& region) {
    if (!(surrogate.curvature > 0.0))
        return surrogate.expansion_point;
    return region.clamp(surrogate.expansion_point -
                        surrogate.grad_z / (2.0 * surrogate.curvature));
}

Eigen::Vector2d update_user_position(const PathSet& paths, const Eigen::MatrixXcd& F_k,
                                     const Eigen::MatrixXcd& W, int k,
                                     std::complex<double> u_k,
                                     const Eigen::Vector2d& r_k_n, const Rect& region,
                                     double wavelength) {
    const UserCoefficients coefficients =
        build_user_coefficients(F_k, paths.path_response, W, k, u_k);
    const UserSurrogate surrogate =
        build_user_surrogate(coefficients, paths.dirs_rx, r_k_n, wavelength);
    return update_user_position(surrogate, region);
}

}  // namespace mamimo::user_position
