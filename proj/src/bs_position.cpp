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

#include "mamimo/bs_position.hpp"

#include <cmath>
#include <stdexcept>

namespace mamimo::bs_position {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

}  // namespace

double quadratic_form_upper_bound(const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& M,
                    const Eigen::VectorXcd& x, const Eigen::VectorXcd& x0) {
    const std::complex<double> quad = (x.adjoint() * M * x).value();
    const std::complex<double> cross = (x.adjoint() * (L - M) * x0).value();
    const std::complex<double> shift = (x0.adjoint() * (M - L) * x0).value();
    return std::real(quad) + 2.0 * std::real(cross) + std::real(shift);
}

double linear_form_value(const Eigen::VectorXcd& b, const Eigen::Matrix2Xd& dirs,
                         const Eigen::Vector2d& t, double wavelength) {
    const Eigen::VectorXcd f = channel::field_response(dirs, t, wavelength);
    return std::real(b.dot(f));  // Eigen's dot conjugates the left argument
}

Eigen::Vector2d linear_form_gradient(const Eigen::VectorXcd& b,
                                     const Eigen::Matrix2Xd& dirs,
                                     const Eigen::Vector2d& t0, double wavelength) {
    const double wave_number = 2.0 * M_PI / wavelength;
    const Eigen::VectorXcd f0 = channel::field_response(dirs, t0, wavelength);
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (Eigen::Index l = 0; l < b.size(); ++l) {
        // d f_l / d t = j (2 pi / lambda) n_l f_l
        const std::complex<double> df = kImag * wave_number * std::conj(b[l]) * f0[l];
        grad += std::real(df) * dirs.col(l);
    }
    return grad;
}

LinearFormBounds linear_form_bounds(const Eigen::VectorXcd& b, const Eigen::Matrix2Xd& dirs,
                               const Eigen::Vector2d& t, const Eigen::Vector2d& t0,
                               double wavelength) {
    const double value0 = linear_form_value(b, dirs, t0, wavelength);
    const Eigen::Vector2d grad = linear_form_gradient(b, dirs, t0, wavelength);
    const double curvature =
        4.0 * M_PI * M_PI / (wavelength * wavelength) * b.cwiseAbs().sum();
    const Eigen::Vector2d delta = t - t0;
    const double linear = value0 + grad.dot(delta);
    const double quad = curvature * delta.squaredNorm();
    return {linear - quad, linear + quad};
}

PositionCoefficients build_coefficients(const Eigen::MatrixXcd& F_k,
                                        const Eigen::VectorXcd& sigma_g,
                                        const Eigen::MatrixXcd& W, int k, int m,
                                        std::complex<double> u_k, double v_k,
                                        double alpha_k) {
    if (F_k.rows() != sigma_g.size())
        throw std::invalid_argument("build_coefficients: F and Sigma g disagree on L_t");
    if (F_k.cols() != W.rows())
        throw std::invalid_argument("build_coefficients: F and W disagree on M");

    const double u_sq = std::norm(u_k);
    const double scale = alpha_k * v_k * u_sq * W.row(m).squaredNorm();

    PositionCoefficients out;
    out.A = scale * (sigma_g * sigma_g.adjoint());
    out.bound_scale = scale * sigma_g.squaredNorm();

    // Cross-antenna coupling: for each user j, pair antenna m's weight with
    // the field responses of every other antenna.
    const Eigen::RowVectorXcd projections = sigma_g.adjoint() * F_k;  // a^H f(t_n)
    std::complex<double> coupling{0.0, 0.0};
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
        const std::complex<double> all = (projections * W.col(j)).value();
        const std::complex<double> own = W(m, j) * projections[m];
        coupling += std::conj(W(m, j)) * (all - own);
    }
    const std::complex<double> factor =
        2.0 * alpha_k * v_k * (u_sq * coupling - u_k * std::conj(W(m, k)));
    out.b = factor * sigma_g;
    return out;
}

PositionSurrogate build_surrogate(const PositionCoefficients& coefficients,
                                  const Eigen::Matrix2Xd& dirs_tx,
                                  const Eigen::Vector2d& t_m_n, double wavelength) {
    PositionSurrogate s;
    s.A = coefficients.A;
    s.b = coefficients.b;
    s.expansion_point = t_m_n;

    const Eigen::VectorXcd f0 = channel::field_response(dirs_tx, t_m_n, wavelength);
    s.b_hat = 2.0 * (coefficients.A * f0 - coefficients.bound_scale * f0) + coefficients.b;
    s.grad_z = linear_form_gradient(s.b_hat, dirs_tx, t_m_n, wavelength);
    s.curvature =
        4.0 * M_PI * M_PI / (wavelength * wavelength) * s.b_hat.cwiseAbs().sum();
    return s;
}

double minorize_distance(const Eigen::Vector2d& t_m, const Eigen::Vector2d& t_j,
                         const Eigen::Vector2d& t_m_n) {
    const Eigen::Vector2d anchor = t_m_n - t_j;
    const double norm = anchor.norm();
    if (!(norm > 0.0))
        throw std::invalid_argument("minorize_distance: expansion point coincides with t_j");
    return anchor.dot(t_m - t_j) / norm;
}

GeneralUpdateResult update_position_general(int m,
                                            std::span<const PositionSurrogate> surrogates,
                                            std::span<const Eigen::Vector2d> bs_positions,
                                            double min_distance, const Rect& region,
                                            double wavelength) {
    const Eigen::Vector2d t0 = bs_positions[static_cast<std::size_t>(m)];

    double curvature = 0.0;
    Eigen::Vector2d grad_sum = Eigen::Vector2d::Zero();
    for (const PositionSurrogate& s : surrogates) {
        curvature += s.curvature;
        grad_sum += s.grad_z;
    }

    GeneralUpdateResult result;
    if (!(curvature > 0.0)) {
        result.position = t0;  // flat surrogate carries no information
        return result;
    }

    qp::QpProblem problem;
    problem.curvature = curvature;
    problem.gradient = grad_sum - 2.0 * curvature * t0;
    problem.box = region;
    if (min_distance > 0.0) {
        problem.constraints.reserve(bs_positions.size() - 1);
        for (std::size_t j = 0; j < bs_positions.size(); ++j) {
            if (static_cast<int>(j) == m)
                continue;
            Eigen::Vector2d anchor = t0 - bs_positions[j];
            if (anchor.norm() <= 0.0) {
                // Degenerate expansion point; nudge deterministically before
                // linearizing so the constraint normal is defined.
                anchor = Eigen::Vector2d(1e-6 * wavelength, 0.0);
            }
            const Eigen::Vector2d normal = anchor / anchor.norm();
            problem.constraints.push_back(
                {normal, min_distance + normal.dot(bs_positions[j])});
        }
    }

    // A grossly infeasible expansion point (coincident antennas) cannot
    // satisfy its own linearization; leave it in place rather than guess.
    for (const qp::Halfspace& h : problem.constraints)
        if (h.residual(t0) < -1e-9 * h.normal.norm()) {
            result.position = t0;
            result.qp_converged = false;
            return result;
        }

    const qp::QpResult solved = qp::solve(problem, t0);
    result.position = solved.x;
    result.qp_converged = solved.converged;
    result.qp_used = true;
    return result;
}

Eigen::Vector2d update_position_planar(std::span<const PositionSurrogate> surrogates,
                                       const Eigen::Vector2d& t_m_n, const Rect& cell) {
    double curvature = 0.0;
    Eigen::Vector2d grad_sum = Eigen::Vector2d::Zero();
    for (const PositionSurrogate& s : surrogates) {
        curvature += s.curvature;
        grad_sum += s.grad_z;
    }
    if (!(curvature > 0.0))
        return t_m_n;
    return cell.clamp(t_m_n - grad_sum / (2.0 * curvature));
}

}  // namespace mamimo::bs_position
