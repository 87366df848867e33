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

#include "mamimo/channel.hpp"
#include "mamimo/geometry.hpp"
#include "mamimo/qp.hpp"

namespace mamimo {

/// Quadratic-plus-linear coefficients of the single-antenna objective
/// restricted to t_m: f^H A f + Re(b^H f) + const. A is a scaled outer
/// product a a^H with a = Sigma_k g_k, so its largest eigenvalue is
/// bound_scale = scale * ||a||^2 and bound_scale * I dominates A.
struct PositionCoefficients {
    Eigen::MatrixXcd A;      ///< L_t x L_t, Hermitian PSD
    Eigen::VectorXcd b;      ///< L_t
    double bound_scale = 0.0;
};

/// Scalar quadratic majorizer of the single-antenna objective around an
/// expansion point: curvature ||t||^2 + (grad_z - 2 curvature t0)^T t + const.
struct PositionSurrogate {
    Eigen::MatrixXcd A;
    Eigen::VectorXcd b;
    Eigen::VectorXcd b_hat;
    Eigen::Vector2d grad_z = Eigen::Vector2d::Zero();
    double curvature = 0.0;  ///< (4 pi^2 / lambda^2) ||b_hat||_1
    Eigen::Vector2d expansion_point = Eigen::Vector2d::Zero();
};

namespace bs_position {

/// Upper bound of the Hermitian quadratic form x^H L x linearized at x0:
/// x^H M x + 2 Re(x^H (L - M) x0) + x0^H (M - L) x0, valid for M >= L,
/// tight at x = x0.
double quadratic_form_upper_bound(const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& M,
                    const Eigen::VectorXcd& x, const Eigen::VectorXcd& x0);

/// z(t) = Re(b^H f(t)) for the field response over the given directions.
double linear_form_value(const Eigen::VectorXcd& b, const Eigen::Matrix2Xd& dirs,
                         const Eigen::Vector2d& t, double wavelength);

/// Gradient of z at t0: Re(b^H df(t0)) with df the per-path phase derivative.
Eigen::Vector2d linear_form_gradient(const Eigen::VectorXcd& b,
                                     const Eigen::Matrix2Xd& dirs,
                                     const Eigen::Vector2d& t0, double wavelength);

struct LinearFormBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Quadratic sandwich of z(t) around t0 with curvature
/// (4 pi^2 / lambda^2) ||b||_1; both sides are tight at t = t0.
LinearFormBounds linear_form_bounds(const Eigen::VectorXcd& b, const Eigen::Matrix2Xd& dirs,
                               const Eigen::Vector2d& t, const Eigen::Vector2d& t0,
                               double wavelength);

/// Coefficients (A, b) of the objective restricted to BS antenna m for user
/// k. F_k is the field-response matrix at the current positions and
/// sigma_g = Sigma_k g_k(r_k). Throws on shape mismatches.
PositionCoefficients build_coefficients(const Eigen::MatrixXcd& F_k,
                                        const Eigen::VectorXcd& sigma_g,
                                        const Eigen::MatrixXcd& W, int k, int m,
                                        std::complex<double> u_k, double v_k,
                                        double alpha_k);

/// Two-stage majorizer at t_m_n: the quadratic bound with M = bound_scale * I folds the
/// quadratic part into b_hat = 2 (A - bound_scale I) f(t_m_n) + b, and the
/// linear-form bound turns z(t) = Re(b_hat^H f(t)) into a scalar quadratic.
PositionSurrogate build_surrogate(const PositionCoefficients& coefficients,
                                  const Eigen::Matrix2Xd& dirs_tx,
                                  const Eigen::Vector2d& t_m_n, double wavelength);

/// Cauchy-Schwarz minorizer of the distance ||t_m - t_j|| linearized at
/// t_m_n; never exceeds the true distance and matches it at t_m = t_m_n.
/// Throws std::invalid_argument when t_m_n == t_j.
double minorize_distance(const Eigen::Vector2d& t_m, const Eigen::Vector2d& t_j,
                         const Eigen::Vector2d& t_m_n);

struct GeneralUpdateResult {
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    bool qp_converged = true;
    bool qp_used = false;
};

/// General-mode update of antenna m: minimize the summed surrogate subject
/// to the linearized distance constraints against every other antenna and
/// the region box. The expansion point is always feasible for the QP, so
/// the step never increases the surrogate or the true objective, and the
/// linearized constraints imply the true distance constraints.
GeneralUpdateResult update_position_general(int m,
                                            std::span<const PositionSurrogate> surrogates,
                                            std::span<const Eigen::Vector2d> bs_positions,
                                            double min_distance, const Rect& region,
                                            double wavelength);

/// Planar-mode update: projected closed-form step
/// clamp(t0 - sum_k grad_z / (2 sum_k curvature)) onto the antenna's cell.
/// Zero total curvature returns the expansion point unchanged.
Eigen::Vector2d update_position_planar(std::span<const PositionSurrogate> surrogates,
                                       const Eigen::Vector2d& t_m_n, const Rect& cell);

}  // namespace bs_position
}  // namespace mamimo
