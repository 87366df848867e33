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

#include "mamimo/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mamimo::report {

namespace {

using nlohmann::json;

std::string fmt(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& pair = j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c));
            m(i, c) = {pair.at(0).get<double>(), pair.at(1).get<double>()};
        }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

json points_to_json(const std::vector<Eigen::Vector2d>& points) {
    json out = json::array();
    for (const auto& p : points)
        out.push_back(json::array({p.x(), p.y()}));
    return out;
}

std::vector<Eigen::Vector2d> points_from_json(const json& j) {
    std::vector<Eigen::Vector2d> points;
    points.reserve(j.size());
    for (const auto& p : j)
        points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return points;
}

json aggregate_to_json(const driver::Aggregate& a) {
    return json{{"mean", a.mean}, {"stddev", a.stddev}, {"count", a.count}};
}

}  // namespace

std::vector<OutputRecord> records_from_run(const driver::RunReport& run, int run_id,
                                           const std::string& baseline,
                                           const std::string& mode,
                                           const std::string& sweep_variable,
                                           double sweep_value, int trial) {
    std::vector<OutputRecord> records;
    records.reserve(run.iterations.size());
    for (const auto& it : run.iterations) {
        OutputRecord r;
        r.run_id = run_id;
        r.baseline = baseline;
        r.mode = mode;
        r.sweep_variable = sweep_variable;
        r.sweep_value = sweep_value;
        r.trial = trial;
        r.iteration = it.iteration;
        r.wsr_nats = it.wsr_nats;
        r.wsr_bits = it.wsr_nats / M_LN2;
        r.wmmse_objective = it.objective;
        r.max_distance_residual = it.max_distance_residual;
        r.power_residual = it.power_residual;
        r.beamforming_ms = it.beamforming_ms;
        r.bs_position_ms = it.bs_position_ms;
        r.user_position_ms = it.user_position_ms;
        r.warmup = it.iteration == 0;
        records.push_back(std::move(r));
    }
    return records;
}

void write_trace_csv(const std::string& path, const std::vector<OutputRecord>& records) {
    auto out = open_output(path);
    out << "run_id,baseline,mode,sweep_variable,sweep_value,trial,iteration,"
           "wsr_nats,wsr_bits,wmmse_objective,max_distance_residual,power_residual\n";
    for (const auto& r : records)
        out << r.run_id << ',' << r.baseline << ',' << r.mode << ',' << r.sweep_variable
            << ',' << fmt(r.sweep_value) << ',' << r.trial << ',' << r.iteration << ','
            << fmt(r.wsr_nats) << ',' << fmt(r.wsr_bits) << ',' << fmt(r.wmmse_objective)
            << ',' << fmt(r.max_distance_residual) << ',' << fmt(r.power_residual)
            << '\n';
}

void write_timings_csv(const std::string& path, const std::vector<OutputRecord>& records) {
    auto out = open_output(path);
    out << "run_id,iteration,beamforming_ms,bs_position_ms,user_position_ms,warmup\n";
    for (const auto& r : records)
        out << r.run_id << ',' << r.iteration << ',' << fmt(r.beamforming_ms) << ','
            << fmt(r.bs_position_ms) << ',' << fmt(r.user_position_ms) << ','
            << (r.warmup ? 1 : 0) << '\n';
}

void write_summary_json(const std::string& path, const std::vector<RunSummary>& summaries) {
    json groups = json::array();
    for (const auto& s : summaries) {
        groups.push_back(json{{"baseline", s.baseline},
                              {"mode", s.mode},
                              {"sweep_variable", s.sweep_variable},
                              {"sweep_value", s.sweep_value},
                              {"trials", s.trials},
                              {"converged_trials", s.converged_trials},
                              {"final_wsr_nats", aggregate_to_json(s.final_wsr_nats)},
                              {"final_wsr_bits",
                               json{{"mean", s.final_wsr_nats.mean / M_LN2},
                                    {"stddev", s.final_wsr_nats.stddev / M_LN2},
                                    {"count", s.final_wsr_nats.count}}},
                              {"total_ms", aggregate_to_json(s.total_ms)},
                              {"mean_bs_block_ms", aggregate_to_json(s.mean_bs_block_ms)},
                              {"iterations", aggregate_to_json(s.iterations)}});
    }
    auto out = open_output(path);
    out << json{{"groups", groups}}.dump(2) << '\n';
}

void write_scenario_archive(const std::string& path,
                            const std::vector<ArchivedScenario>& archive) {
    json entries = json::array();
    for (const auto& a : archive) {
        json users = json::array();
        for (const PathSet& p : a.scenario.geometry) {
            users.push_back(json{{"theta_tx", vector_to_json(p.theta_tx)},
                                 {"phi_tx", vector_to_json(p.phi_tx)},
                                 {"theta_rx", vector_to_json(p.theta_rx)},
                                 {"phi_rx", vector_to_json(p.phi_rx)},
                                 {"path_response", complex_matrix_to_json(p.path_response)}});
        }
        entries.push_back(
            json{{"run_id", a.run_id},
                 {"config", json::parse(config_to_json(a.config))},
                 {"paths", std::move(users)},
                 {"initial_bs", points_to_json(a.scenario.initial_positions.bs)},
                 {"initial_users", points_to_json(a.scenario.initial_positions.users)}});
    }
    auto out = open_output(path);
    out << json{{"scenarios", entries}}.dump(2) << '\n';
}

std::vector<ArchivedScenario> load_scenario_archive(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open scenario archive '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario archive: invalid JSON: ") + e.what());
    }

    std::vector<ArchivedScenario> archive;
    for (const auto& entry : j.at("scenarios")) {
        ArchivedScenario a;
        a.run_id = entry.at("run_id").get<int>();
        a.config = config_from_json(entry.at("config").dump());
        for (const auto& user : entry.at("paths")) {
            PathSet p;
            p.theta_tx = vector_from_json(user.at("theta_tx"));
            p.phi_tx = vector_from_json(user.at("phi_tx"));
            p.theta_rx = vector_from_json(user.at("theta_rx"));
            p.phi_rx = vector_from_json(user.at("phi_rx"));
            p.path_response = complex_matrix_from_json(user.at("path_response"));
            p.dirs_tx.resize(2, p.theta_tx.size());
            for (Eigen::Index l = 0; l < p.theta_tx.size(); ++l)
                p.dirs_tx.col(l) = channel::direction_vector(p.theta_tx[l], p.phi_tx[l]);
            p.dirs_rx.resize(2, p.theta_rx.size());
            for (Eigen::Index l = 0; l < p.theta_rx.size(); ++l)
                p.dirs_rx.col(l) = channel::direction_vector(p.theta_rx[l], p.phi_rx[l]);
            a.scenario.geometry.push_back(std::move(p));
        }
        a.scenario.initial_positions.bs = points_from_json(entry.at("initial_bs"));
        a.scenario.initial_positions.users = points_from_json(entry.at("initial_users"));
        archive.push_back(std::move(a));
    }
    return archive;
}

}  // namespace mamimo::report
