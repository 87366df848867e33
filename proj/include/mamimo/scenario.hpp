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

#include "mamimo/geometry.hpp"

namespace mamimo {

/// How base-station antennas are allowed to move.
///  - general: anywhere in tx_region, subject to the pairwise minimum
///    distance; position updates solve a small QP.
///  - planar: each antenna owns a private cell; cells are at least the
///    minimum distance apart, and updates are closed-form projected steps.
enum class MovementMode { general, planar };

std::string to_string(MovementMode mode);
MovementMode movement_mode_from_string(const std::string& s);

/// Physical and algorithmic parameters of one scenario. All powers are in
/// linear scale (watts); dBm fields in config files are converted on load.
struct ScenarioConfig {
    int num_bs_antennas = 16;              ///< M
    int num_users = 4;                     ///< K
    std::vector<int> num_tx_paths;         ///< L_t per user
    std::vector<int> num_rx_paths;         ///< L_r per user
    double wavelength = 1.0;               ///< lambda (m)
    double min_distance = 0.5;             ///< D (m), BS inter-antenna spacing
    Rect tx_region{0.0, 0.0, 5.0, 5.0};    ///< C^t
    std::vector<Rect> rx_regions;          ///< C_k^r, one per user
    double noise_power = 0.0316227766016838;  ///< sigma^2, linear (15 dBm)
    double max_power = 1.0;                ///< P_max, linear (30 dBm)
    std::vector<double> weights;           ///< alpha_k >= 0
    MovementMode mode = MovementMode::general;
    std::vector<Rect> planar_cells;        ///< C_m^t; auto-partitioned if empty
    std::uint64_t rng_seed = 1;

    /// Variance of each path-response entry; <= 0 means 1/L_t for the user,
    /// which keeps the expected channel gain independent of the path count.
    double path_gain_variance = 0.0;

    /// Elevation/azimuth angles are drawn uniformly from this interval.
    double angle_min = 0.0;
    double angle_max = M_PI;

    /// Draw the initial BS positions at random (still seeded) instead of the
    /// deterministic spacing-feasible grid.
    bool random_initial_positions = false;

    int tx_paths(int k) const { return num_tx_paths.at(static_cast<std::size_t>(k)); }
    int rx_paths(int k) const { return num_rx_paths.at(static_cast<std::size_t>(k)); }
    double path_variance(int k) const {
        return path_gain_variance > 0.0 ? path_gain_variance : 1.0 / tx_paths(k);
    }
};

/// 10^((dBm - 30)/10) watts.
double dbm_to_linear(double dbm);
double linear_to_dbm(double watts);

/// Grid layout (columns x rows) used for initial BS positions and for the
/// planar cell partition. Throws std::invalid_argument when M points with
/// spacing D cannot be placed inside the region.
struct GridLayout {
    int cols = 1;
    int rows = 1;
};
GridLayout feasible_grid_layout(int count, const Rect& region, double min_distance);

/// Partition `region` into `count` cells separated by exactly `min_distance`.
std::vector<Rect> make_planar_cells(const Rect& region, int count, double min_distance);

/// Validates every invariant of the config; throws std::invalid_argument with
/// the offending field name. Fills derived defaults (per-user vectors sized K,
/// planar cells when in planar mode).
void validate_config(ScenarioConfig& config);

/// Parse a config from JSON text / file. Missing fields take the defaults
/// above. Accepts "sigma2_dbm"/"p_max_dbm" as alternatives to the linear
/// fields, and scalar path counts that apply to every user.
ScenarioConfig config_from_json(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
std::string config_to_json(const ScenarioConfig& config);
void save_config(const ScenarioConfig& config, const std::string& path);

/// Which sweep variable an experiment preset varies.
enum class SweepVariable { none, num_bs_antennas, min_distance, max_power };
std::string to_string(SweepVariable v);

/// Named experiment: a base config plus one swept variable, the baselines to
/// compare, the movement modes to run, and the trial count.
struct ExperimentPreset {
    std::string name;
    ScenarioConfig base;
    SweepVariable sweep = SweepVariable::none;
    std::vector<double> sweep_values;       ///< strictly increasing
    std::vector<std::string> baselines;     ///< driver baseline names
    std::vector<MovementMode> modes;
    int trials = 1;
};

/// The default experiment battery: a convergence trace (both movement
/// modes), an antenna-count sweep over all four baselines, and a
/// minimum-distance sweep.
std::vector<ExperimentPreset> preset_figures();

/// Look up one preset by name; throws std::invalid_argument listing valid
/// names when not found.
ExperimentPreset find_preset(const std::string& name);

/// Expand a preset into the concrete configs it runs, in sweep order.
std::vector<ScenarioConfig> expand_preset(const ExperimentPreset& preset);

}  // namespace mamimo
