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

#include "mamimo/beamforming.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace mamimo::beamforming {

namespace {

// sum_i |h_k^H w_i|^2 + sigma^2 per user; row k of (H^H W) holds h_k^H w_i.
Eigen::VectorXd received_power(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                               double noise_power) {
    const Eigen::MatrixXcd cross = H.adjoint() * W;
    return cross.cwiseAbs2().rowwise().sum().array() + noise_power;
}

}  // namespace

Eigen::VectorXd sinr(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                     double noise_power) {
    const Eigen::Index K = H.cols();
    const Eigen::MatrixXcd cross = H.adjoint() * W;
    Eigen::VectorXd gamma(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double signal = std::norm(cross(k, k));
        const double interference =
            cross.row(k).cwiseAbs2().sum() - signal + noise_power;
        gamma[k] = signal / interference;
    }
    return gamma;
}

double wsr(const Eigen::VectorXd& sinr_values, const Eigen::VectorXd& weights) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < sinr_values.size(); ++k)
        total += weights[k] * std::log1p(sinr_values[k]);
    return total;
}

double mse(const Eigen::VectorXcd& h_k, const Eigen::MatrixXcd& W, int k,
           std::complex<double> u_k, double noise_power) {
    const Eigen::RowVectorXcd cross = h_k.adjoint() * W;
    const double power = cross.cwiseAbs2().sum() + noise_power;
    return 1.0 + std::norm(u_k) * power - 2.0 * std::real(std::conj(u_k) * cross[k]);
}

double wmmse_objective(const Eigen::VectorXd& mse_values, const Eigen::VectorXd& v,
                       const Eigen::VectorXd& weights) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < mse_values.size(); ++k)
        total += weights[k] * (v[k] * mse_values[k] - std::log(v[k]));
    return total;
}

LinkMetrics evaluate_links(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                           const Eigen::VectorXcd& u, const Eigen::VectorXd& v,
                           const Eigen::VectorXd& weights, double noise_power) {
    LinkMetrics metrics;
    metrics.sinr = sinr(H, W, noise_power);
    metrics.mse.resize(H.cols());
    for (Eigen::Index k = 0; k < H.cols(); ++k)
        metrics.mse[k] = mse(H.col(k), W, static_cast<int>(k), u[k], noise_power);
    metrics.wsr_nats = wsr(metrics.sinr, weights);
    metrics.objective = wmmse_objective(metrics.mse, v, weights);
    return metrics;
}

Eigen::VectorXcd update_u(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                          double noise_power) {
    const Eigen::MatrixXcd cross = H.adjoint() * W;
    const Eigen::VectorXd power = received_power(H, W, noise_power);
    Eigen::VectorXcd u(H.cols());
    for (Eigen::Index k = 0; k < H.cols(); ++k)
        u[k] = cross(k, k) / power[k];
    return u;
}

Eigen::VectorXd update_v(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& W,
                         const Eigen::VectorXcd& u) {
    Eigen::VectorXd v(H.cols());
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
        const std::complex<double> aligned =
            std::conj(u[k]) * (H.col(k).adjoint() * W.col(k)).value();
        const double denom = 1.0 - std::real(aligned);
        if (!(denom > 0.0))
            throw std::runtime_error(
                "update_v: non-positive denominator; state is numerically invalid");
        v[k] = 1.0 / denom;
    }
    return v;
}

double transmit_power(const Eigen::MatrixXcd& W) { return W.cwiseAbs2().sum(); }

WUpdateResult update_w(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& u,
                       const Eigen::VectorXd& v, const Eigen::VectorXd& weights,
                       double max_power, const WUpdateOptions& options) {
    const Eigen::Index M = H.rows();
    const Eigen::Index K = H.cols();
    for (Eigen::Index k = 0; k < K; ++k)
        if (!(v[k] > 0.0))
            throw std::invalid_argument("update_w: v must be positive");

    WUpdateResult result;
    result.W = Eigen::MatrixXcd::Zero(M, K);

    Eigen::VectorXcd rhs_scale(K);   // alpha_k u_k v_k
    Eigen::VectorXd quad_scale(K);   // alpha_k |u_k|^2 v_k
    bool degenerate = true;
    for (Eigen::Index k = 0; k < K; ++k) {
        rhs_scale[k] = weights[k] * u[k] * v[k];
        quad_scale[k] = weights[k] * std::norm(u[k]) * v[k];
        if (rhs_scale[k] != std::complex<double>(0.0, 0.0))
            degenerate = false;
    }
    if (degenerate)
        return result;  // all receive scalars vanish: W = 0

    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(M, M);
    for (Eigen::Index k = 0; k < K; ++k)
        gram.noalias() += quad_scale[k] * (H.col(k) * H.col(k).adjoint());

    const auto beamformers_at = [&](double mu) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd solved(M, K);
        if (mu > 0.0) {
            Eigen::MatrixXcd shifted = gram;
            shifted.diagonal().array() += mu;
            solved = Eigen::LLT<Eigen::MatrixXcd>(shifted).solve(H);
        } else {
            // Rank-deficient at mu = 0 whenever K < M; the minimum-norm
            // solution is the least-power optimizer among the solutions.
            solved = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(gram).solve(H);
        }
        for (Eigen::Index k = 0; k < K; ++k)
            solved.col(k) *= rhs_scale[k];
        return solved;
    };

    Eigen::MatrixXcd W0 = beamformers_at(0.0);
    double power0 = transmit_power(W0);
    if (power0 <= max_power && W0.allFinite()) {
        result.W = std::move(W0);
        result.dual = 0.0;
        result.total_power = power0;
        return result;
    }

    // Power is strictly decreasing in mu; grow the upper end until feasible,
    // then bisect keeping the feasible (upper) side as the returned iterate.
    double lo = 0.0;
    double hi = 1.0;
    Eigen::MatrixXcd W_hi = beamformers_at(hi);
    double power_hi = transmit_power(W_hi);
    int iters = 0;
    while (power_hi > max_power && iters < options.max_bisection_iters) {
        lo = hi;
        hi *= 2.0;
        W_hi = beamformers_at(hi);
        power_hi = transmit_power(W_hi);
        ++iters;
    }
    if (power_hi > max_power)
        throw std::runtime_error("update_w: bisection bracket did not close");

    const double tol = options.power_tolerance_rel * max_power;
    while (iters < options.max_bisection_iters && (max_power - power_hi) > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;  // bracket exhausted at double precision
        Eigen::MatrixXcd W_mid = beamformers_at(mid);
        const double power_mid = transmit_power(W_mid);
        if (power_mid > max_power) {
            lo = mid;
        } else {
            hi = mid;
            W_hi = std::move(W_mid);
            power_hi = power_mid;
        }
        ++iters;
    }

    result.W = std::move(W_hi);
    result.dual = hi;
    result.bisection_iters = iters;
    result.total_power = power_hi;
    return result;
}

}  // namespace mamimo::beamforming
