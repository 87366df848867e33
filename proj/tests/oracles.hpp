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

// Test-only oracles: naive scalar re-implementations of the quantities the
// library computes, kept deliberately independent of the library's vectorized
// code paths (plain loops over std::complex).

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mamimo/beamforming.hpp"
#include "mamimo/channel.hpp"
#include "mamimo/qp.hpp"
#include "mamimo/rng.hpp"
#include "mamimo/scenario.hpp"

namespace oracles {

using cd = std::complex<double>;

// --- naive channel synthesis ----------------------------------------------

inline std::vector<cd> naive_field_response(const std::vector<Eigen::Vector2d>& dirs,
                                            const Eigen::Vector2d& pos, double lambda) {
    std::vector<cd> f;
    f.reserve(dirs.size());
    for (const auto& n : dirs) {
        const double phase = 2.0 * M_PI / lambda * (pos.x() * n.x() + pos.y() * n.y());
        f.emplace_back(std::cos(phase), std::sin(phase));
    }
    return f;
}

inline std::vector<Eigen::Vector2d> columns_of(const Eigen::Matrix2Xd& m) {
    std::vector<Eigen::Vector2d> cols;
    for (Eigen::Index i = 0; i < m.cols(); ++i)
        cols.push_back(m.col(i));
    return cols;
}

// h_k entry by entry: h[m] = sum_l conj(f_l(t_m)) * (Sigma g)_l.
inline std::vector<cd> naive_channel(const std::vector<Eigen::Vector2d>& bs,
                                     const Eigen::Vector2d& user,
                                     const mamimo::PathSet& paths, double lambda) {
    const auto tx_dirs = columns_of(paths.dirs_tx);
    const auto rx_dirs = columns_of(paths.dirs_rx);
    const auto g = naive_field_response(rx_dirs, user, lambda);
    std::vector<cd> sigma_g(static_cast<std::size_t>(paths.num_tx_paths()), cd{0.0, 0.0});
    for (int l = 0; l < paths.num_tx_paths(); ++l)
        for (int r = 0; r < paths.num_rx_paths(); ++r)
            sigma_g[static_cast<std::size_t>(l)] +=
                paths.path_response(l, r) * g[static_cast<std::size_t>(r)];
    std::vector<cd> h;
    h.reserve(bs.size());
    for (const auto& t : bs) {
        const auto f = naive_field_response(tx_dirs, t, lambda);
        cd sum{0.0, 0.0};
        for (std::size_t l = 0; l < f.size(); ++l)
            sum += std::conj(f[l]) * sigma_g[l];
        h.push_back(sum);
    }
    return h;
}

// --- naive link metrics -----------------------------------------------------

inline cd naive_inner(const std::vector<cd>& h, const Eigen::VectorXcd& w) {
    cd sum{0.0, 0.0};
    for (std::size_t m = 0; m < h.size(); ++m)
        sum += std::conj(h[m]) * w[static_cast<Eigen::Index>(m)];
    return sum;
}

inline double naive_sinr(const std::vector<std::vector<cd>>& h,
                         const Eigen::MatrixXcd& W, int k, double sigma2) {
    const double signal = std::norm(naive_inner(h[static_cast<std::size_t>(k)], W.col(k)));
    double interference = sigma2;
    for (Eigen::Index i = 0; i < W.cols(); ++i)
        if (i != k)
            interference += std::norm(naive_inner(h[static_cast<std::size_t>(k)], W.col(i)));
    return signal / interference;
}

inline double naive_mse(const std::vector<cd>& h_k, const Eigen::MatrixXcd& W, int k,
                        cd u_k, double sigma2) {
    double power = sigma2;
    for (Eigen::Index j = 0; j < W.cols(); ++j)
        power += std::norm(naive_inner(h_k, W.col(j)));
    return 1.0 + std::norm(u_k) * power -
           2.0 * std::real(std::conj(u_k) * naive_inner(h_k, W.col(k)));
}

// Full objective sum_k alpha_k (v_k e_k - log v_k) with channels rebuilt from
// the positions, so it can be restricted to any single position variable.
inline double naive_objective(const std::vector<Eigen::Vector2d>& bs,
                              const std::vector<Eigen::Vector2d>& users,
                              const mamimo::ChannelGeometry& geometry,
                              const Eigen::MatrixXcd& W, const Eigen::VectorXcd& u,
                              const Eigen::VectorXd& v, const Eigen::VectorXd& alpha,
                              double sigma2, double lambda) {
    double total = 0.0;
    for (std::size_t k = 0; k < geometry.size(); ++k) {
        const auto h = naive_channel(bs, users[k], geometry[k], lambda);
        const double e = naive_mse(h, W, static_cast<int>(k),
                                   u[static_cast<Eigen::Index>(k)], sigma2);
        total += alpha[static_cast<Eigen::Index>(k)] *
                 (v[static_cast<Eigen::Index>(k)] * e -
                  std::log(v[static_cast<Eigen::Index>(k)]));
    }
    return total;
}

// --- random state builders --------------------------------------------------

inline Eigen::VectorXcd random_cvector(mamimo::Rng& rng, int n, double scale = 1.0) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i)
        v[i] = rng.complex_normal(scale);
    return v;
}

inline Eigen::MatrixXcd random_cmatrix(mamimo::Rng& rng, int rows, int cols,
                                       double scale = 1.0) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = rng.complex_normal(scale);
    return m;
}

struct RandomLinkState {
    Eigen::MatrixXcd H;   // M x K
    Eigen::MatrixXcd W;   // M x K
    Eigen::VectorXd alpha;
    double sigma2 = 1.0;
    double max_power = 1.0;
};

inline RandomLinkState random_link_state(mamimo::Rng& rng, int M, int K) {
    RandomLinkState s;
    s.H = random_cmatrix(rng, M, K);
    s.W = random_cmatrix(rng, M, K);
    s.max_power = std::exp(rng.uniform(-0.5, 1.5));
    s.W *= std::sqrt(rng.uniform(0.2, 1.0) * s.max_power / s.W.cwiseAbs2().sum());
    s.alpha.resize(K);
    for (int k = 0; k < K; ++k)
        s.alpha[k] = rng.uniform(0.1, 2.0);
    s.sigma2 = std::exp(rng.uniform(-3.0, 0.5));
    return s;
}

// A scenario-backed optimization state a few WMMSE passes in, for tests that
// need realistic coefficient magnitudes.
struct PipelineState {
    mamimo::ScenarioConfig config;
    mamimo::Scenario scenario;
    mamimo::PositionState positions;
    Eigen::MatrixXcd H;
    Eigen::MatrixXcd W;
    Eigen::VectorXcd u;
    Eigen::VectorXd v;
    Eigen::VectorXd alpha;
};

inline PipelineState pipeline_state(std::uint64_t seed, int M = 4, int K = 2, int L = 3) {
    PipelineState s;
    s.config.num_bs_antennas = M;
    s.config.num_users = K;
    s.config.num_tx_paths.assign(static_cast<std::size_t>(K), L);
    s.config.num_rx_paths.assign(static_cast<std::size_t>(K), L);
    s.config.rng_seed = seed;
    mamimo::validate_config(s.config);
    s.scenario = mamimo::channel::generate_scenario(s.config);
    s.positions = s.scenario.initial_positions;
    s.H = mamimo::channel::assemble_channel_matrix(s.positions, s.scenario.geometry,
                                                   s.config.wavelength);
    s.alpha = Eigen::VectorXd::Ones(K);

    mamimo::Rng rng(mamimo::Rng::derive_seed(seed, 99));
    s.W = random_cmatrix(rng, M, K);
    s.W *= std::sqrt(s.config.max_power / s.W.cwiseAbs2().sum());
    for (int pass = 0; pass < 3; ++pass) {
        s.u = mamimo::beamforming::update_u(s.H, s.W, s.config.noise_power);
        s.v = mamimo::beamforming::update_v(s.H, s.W, s.u);
        s.W = mamimo::beamforming::update_w(s.H, s.u, s.v, s.alpha, s.config.max_power).W;
    }
    return s;
}

// --- QP vertex-enumeration oracle -------------------------------------------

// Best feasible point among the unconstrained minimizer, all single-line
// projections and all line intersections (the complete KKT candidate set in
// two dimensions).
inline double qp_oracle_objective(const mamimo::qp::QpProblem& problem) {
    std::vector<std::pair<Eigen::Vector2d, double>> lines;
    for (const auto& h : problem.constraints) {
        const double n = h.normal.norm();
        lines.emplace_back(h.normal / n, h.offset / n);
    }
    lines.push_back({{1.0, 0.0}, problem.box.xmin});
    lines.push_back({{-1.0, 0.0}, -problem.box.xmax});
    lines.push_back({{0.0, 1.0}, problem.box.ymin});
    lines.push_back({{0.0, -1.0}, -problem.box.ymax});

    const auto is_feasible = [&](const Eigen::Vector2d& x) {
        for (const auto& [a, beta] : lines)
            if (a.dot(x) < beta - 1e-9)
                return false;
        return true;
    };

    double best = std::numeric_limits<double>::infinity();
    const auto consider = [&](const Eigen::Vector2d& x) {
        if (is_feasible(x))
            best = std::min(best, problem.objective(x));
    };

    const Eigen::Vector2d center = -problem.gradient / (2.0 * problem.curvature);
    consider(center);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        consider(center + (lines[i].second - lines[i].first.dot(center)) * lines[i].first);
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            Eigen::Matrix2d A;
            A.row(0) = lines[i].first.transpose();
            A.row(1) = lines[j].first.transpose();
            if (std::abs(A.determinant()) < 1e-12)
                continue;
            consider(A.inverse() * Eigen::Vector2d(lines[i].second, lines[j].second));
        }
    }
    return best;
}

}  // namespace oracles
