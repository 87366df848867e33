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

namespace mamimo {

/// Transmit beamformers plus the per-user receive scalar and auxiliary
/// weight of the weighted-MMSE reformulation. Column k of W serves user k;
/// row m is the slice carried by antenna m.
struct BeamformerState {
    Eigen::MatrixXcd W;   ///< M x K
    Eigen::VectorXcd u;   ///< receive scalars
    Eigen::VectorXd v;    ///< auxiliary weights, > 0
};

/// Link-quality numbers for one (H, W, u, v) state.
struct LinkMetrics {
    Eigen::VectorXd sinr;     ///< gamma_k, linear
    Eigen::VectorXd mse;      ///< e_k
    double wsr_nats = 0.0;    ///< sum_k alpha_k log(1 + gamma_k)
    double objective = 0.0;   ///< sum_k alpha_k (v_k e_k - log v_k)
};

namespace beamforming {

/// gamma_k = |h_k^H w_k|^2 / (sum_{i != k} |h_k^H w_i|^2 + sigma^2).
/// Channel columns of H pair with beamformer columns of W.
Eigen::VectorXd sinr(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                     double noise_power);

/// Weighted sum rate in nats: sum_k alpha_k log(1 + gamma_k).
double wsr(const Eigen::VectorXd& sinr_values, const Eigen::VectorXd& weights);

/// e_k = 1 + |u_k|^2 (sigma^2 + sum_j |h_k^H w_j|^2) - 2 Re(u_k^* h_k^H w_k).
double mse(const Eigen::VectorXcd& h_k, const Eigen::MatrixXcd& W, int k,
           std::complex<double> u_k, double noise_power);

/// sum_k alpha_k (v_k e_k - log v_k).
double wmmse_objective(const Eigen::VectorXd& mse_values, const Eigen::VectorXd& v,
                       const Eigen::VectorXd& weights);

/// SINR, MSE, weighted sum rate and objective for the given state.
LinkMetrics evaluate_links(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                           const Eigen::VectorXcd& u, const Eigen::VectorXd& v,
                           const Eigen::VectorXd& weights, double noise_power);

/// MMSE receive scalars: u_k = (sum_i |h_k^H w_i|^2 + sigma^2)^{-1} h_k^H w_k.
Eigen::VectorXcd update_u(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                          double noise_power);

/// v_k = (1 - u_k^* h_k^H w_k)^{-1}; equals 1 + gamma_k when u is MMSE.
/// Throws std::runtime_error on a non-positive denominator, which cannot
/// occur after update_u.
Eigen::VectorXd update_v(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                         const Eigen::VectorXcd& u);

struct WUpdateOptions {
    double power_tolerance_rel = 1e-12;  ///< on |power - P_max| / P_max
    int max_bisection_iters = 200;
};

struct WUpdateResult {
    Eigen::MatrixXcd W;
    double dual = 0.0;         ///< mu; 0 when the power constraint is slack
    int bisection_iters = 0;
    double total_power = 0.0;
};

/// w_k = alpha_k u_k v_k (mu I + sum_i alpha_i |u_i|^2 v_i h_i h_i^H)^{-1} h_k
/// with mu >= 0 chosen so the power constraint holds: mu = 0 when the
/// unconstrained power fits, otherwise bisection on the strictly decreasing
/// power curve. Singular systems at mu = 0 use the minimum-norm solve.
/// Degenerate inputs (all alpha_k u_k v_k = 0) return W = 0.
WUpdateResult update_w(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& u,
                       const Eigen::VectorXd& v, const Eigen::VectorXd& weights,
                       double max_power, const WUpdateOptions& options = {});

/// Total transmit power sum_k ||w_k||^2.
double transmit_power(const Eigen::MatrixXcd& W);

}  // namespace beamforming
}  // namespace mamimo
