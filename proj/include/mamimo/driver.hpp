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

#include <cstdint>
#include <string>
#include <vector>

#include "mamimo/beamforming.hpp"
#include "mamimo/channel.hpp"
#include "mamimo/scenario.hpp"

namespace mamimo {

/// Which optimization blocks run. TMA/TFPA refer to the base station
/// (movable / fixed), RMA/RFPA to the users.
enum class BaselineKind {
    TMA_RMA,    ///< both ends movable (the full design)
    TFPA_RMA,   ///< BS fixed, users movable
    TMA_RFPA,   ///< BS movable, users fixed
    FPA,        ///< all positions fixed (plain WMMSE)
};

std::string to_string(BaselineKind baseline);
BaselineKind baseline_from_string(const std::string& s);
bool baseline_moves_bs(BaselineKind baseline);
bool baseline_moves_users(BaselineKind baseline);
std::vector<BaselineKind> all_baselines();

namespace driver {

struct DriverOptions {
    int max_outer_iters = 200;
    int wmmse_inner_iters = 10;
    int bs_inner_steps = 1;     ///< MM sweeps over the antennas per block
    int user_inner_steps = 1;
    double wsr_tol_rel = 1e-5;
    int patience = 3;           ///< consecutive small-change iterations to stop
    beamforming::WUpdateOptions w_options{};
    /// Validate feasibility after every individual position update (slower;
    /// residuals are folded into the per-iteration records either way).
    bool strict_feasibility_checks = false;
};

/// One outer-iteration record. The objective snapshots are taken after each
/// block in execution order; `objective` and `wsr_nats` are sampled after
/// the end-of-iteration refresh of the receive scalars and weights.
struct IterationRecord {
    int iteration = 0;
    double objective_after_beamforming = 0.0;
    double objective_after_bs_block = 0.0;
    double objective_after_user_block = 0.0;
    double objective = 0.0;
    double wsr_nats = 0.0;
    double beamforming_ms = 0.0;
    double bs_position_ms = 0.0;
    double user_position_ms = 0.0;
    double max_distance_residual = 0.0;  ///< max(0, D - min pairwise distance)
    double region_residual = 0.0;        ///< max clamp distance to region/cell
    double power_residual = 0.0;         ///< max(0, power - P_max)
};

struct RunReport {
    std::vector<IterationRecord> iterations;
    PositionState final_positions;
    BeamformerState final_beamformers;
    bool converged = false;
    double total_ms = 0.0;
    long qp_solve_count = 0;
    long qp_nonconverged_count = 0;

    double final_wsr_nats() const {
        return iterations.empty() ? 0.0 : iterations.back().wsr_nats;
    }
};

/// Block-coordinate descent: WMMSE beamforming, BS antenna positions
/// (general QP or planar closed form per the config), then user antenna
/// positions, until the weighted sum rate stalls for `patience` iterations
/// or the iteration cap is reached. Throws std::invalid_argument on an
/// infeasible initial state and std::runtime_error if the objective stops
/// being finite.
RunReport run_bcd(const Scenario& scenario, const ScenarioConfig& config,
                  BaselineKind baseline, const DriverOptions& options = {});

struct TrialResult {
    int trial = 0;
    BaselineKind baseline = BaselineKind::FPA;
    double final_wsr_nats = 0.0;
    int iterations = 0;
    bool converged = false;
    double total_ms = 0.0;
    double mean_bs_block_ms = 0.0;  ///< warm-up iteration excluded
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

/// Order-independent mean and sample standard deviation.
Aggregate aggregate(const std::vector<double>& values);

struct BaselineSummary {
    BaselineKind baseline = BaselineKind::FPA;
    Aggregate final_wsr_nats;
    Aggregate total_ms;
    Aggregate mean_bs_block_ms;
    Aggregate iterations;
    int converged_trials = 0;
};

struct MonteCarloReport {
    std::vector<TrialResult> trials;  ///< ordered by (trial, baseline)
    std::vector<BaselineSummary> summaries;
};

/// Seeded trials over the same config: trial i uses a seed derived from
/// config.rng_seed and i, and every baseline sees the identical scenario
/// within a trial. Deterministic for a given base seed.
MonteCarloReport run_monte_carlo(const ScenarioConfig& config,
                                 const std::vector<BaselineKind>& baselines,
                                 int trials, const DriverOptions& options = {});

}  // namespace driver
}  // namespace mamimo
