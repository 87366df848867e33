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

#include "mamimo/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mamimo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument(field + ": " + why);
}

Rect rect_from_json(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("xmin") || !j.contains("ymin") ||
        !j.contains("xmax") || !j.contains("ymax"))
        fail(field, "expected an object with xmin/ymin/xmax/ymax");
    Rect r{j.at("xmin").get<double>(), j.at("ymin").get<double>(),
           j.at("xmax").get<double>(), j.at("ymax").get<double>()};
    if (!r.valid())
        fail(field, "xmax/ymax must not be below xmin/ymin");
    return r;
}

json rect_to_json(const Rect& r) {
    return json{{"xmin", r.xmin}, {"ymin", r.ymin}, {"xmax", r.xmax}, {"ymax", r.ymax}};
}

std::vector<int> int_list(const json& j, const std::string& field, int count) {
    std::vector<int> out;
    if (j.is_number_integer()) {
        out.assign(static_cast<std::size_t>(count), j.get<int>());
    } else if (j.is_array()) {
        out = j.get<std::vector<int>>();
    } else {
        fail(field, "expected an integer or an array of integers");
    }
    return out;
}

}  // namespace

std::string to_string(MovementMode mode) {
    return mode == MovementMode::general ? "general" : "planar";
}

MovementMode movement_mode_from_string(const std::string& s) {
    if (s == "general")
        return MovementMode::general;
    if (s == "planar")
        return MovementMode::planar;
    fail("mode", "unknown value '" + s + "' (expected general or planar)");
}

double dbm_to_linear(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double linear_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

GridLayout feasible_grid_layout(int count, const Rect& region, double min_distance) {
    if (count < 1)
        fail("M", "must be >= 1");
    if (count == 1)
        return {1, 1};
    // Try every column count; the layout is feasible when adjacent rows and
    // columns can be min_distance apart. Prefer the squarest feasible split.
    GridLayout best{0, 0};
    int best_score = -1;
    for (int cols = 1; cols <= count; ++cols) {
        const int rows = (count + cols - 1) / cols;
        const bool fits_x = cols == 1 || (cols - 1) * min_distance <= region.width();
        const bool fits_y = rows == 1 || (rows - 1) * min_distance <= region.height();
        if (!fits_x || !fits_y)
            continue;
        const int score = std::min(cols, rows);
        if (score > best_score) {
            best_score = score;
            best = {cols, rows};
        }
    }
    if (best_score < 0)
        fail("tx_region", "cannot place " + std::to_string(count) +
                              " points with spacing " + std::to_string(min_distance) +
                              " inside the region");
    return best;
}

std::vector<Rect> make_planar_cells(const Rect& region, int count, double min_distance) {
    const GridLayout layout = feasible_grid_layout(count, region, min_distance);
    const double cell_w =
        (region.width() - (layout.cols - 1) * min_distance) / layout.cols;
    const double cell_h =
        (region.height() - (layout.rows - 1) * min_distance) / layout.rows;
    if (cell_w < 0.0 || cell_h < 0.0)
        fail("tx_region", "region too small for the planar cell partition");
    std::vector<Rect> cells;
    cells.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int col = i % layout.cols;
        const int row = i / layout.cols;
        const double x0 = region.xmin + col * (cell_w + min_distance);
        const double y0 = region.ymin + row * (cell_h + min_distance);
        cells.push_back(Rect{x0, y0, x0 + cell_w, y0 + cell_h});
    }
    return cells;
}

void validate_config(ScenarioConfig& config) {
    if (config.num_bs_antennas < 1)
        fail("M", "must be >= 1");
    if (config.num_users < 1)
        fail("K", "must be >= 1");
    if (!(config.wavelength > 0.0))
        fail("lambda", "must be > 0");
    if (config.min_distance < 0.0)
        fail("D", "must be >= 0");
    if (!(config.noise_power > 0.0))
        fail("sigma2", "must be > 0");
    if (!(config.max_power > 0.0))
        fail("p_max", "must be > 0");
    if (!config.tx_region.valid() || config.tx_region.width() <= 0.0 ||
        config.tx_region.height() <= 0.0)
        fail("tx_region", "must be a nonempty rectangle");
    if (config.min_distance > config.tx_region.diagonal())
        fail("D", "exceeds the tx_region diagonal; no two points can be that far apart");
    if (!(config.angle_max > config.angle_min))
        fail("angle_max", "must exceed angle_min");

    const auto K = static_cast<std::size_t>(config.num_users);
    if (config.num_tx_paths.empty())
        config.num_tx_paths.assign(K, 4);
    if (config.num_rx_paths.empty())
        config.num_rx_paths.assign(K, 4);
    if (config.num_tx_paths.size() == 1 && K > 1)
        config.num_tx_paths.assign(K, config.num_tx_paths.front());
    if (config.num_rx_paths.size() == 1 && K > 1)
        config.num_rx_paths.assign(K, config.num_rx_paths.front());
    if (config.num_tx_paths.size() != K)
        fail("L_tx", "needs one entry per user (or a single shared value)");
    if (config.num_rx_paths.size() != K)
        fail("L_rx", "needs one entry per user (or a single shared value)");
    for (int l : config.num_tx_paths)
        if (l < 1)
            fail("L_tx", "path counts must be >= 1");
    for (int l : config.num_rx_paths)
        if (l < 1)
            fail("L_rx", "path counts must be >= 1");

    if (config.weights.empty())
        config.weights.assign(K, 1.0);
    if (config.weights.size() != K)
        fail("alpha", "needs one weight per user");
    for (double a : config.weights)
        if (a < 0.0 || !std::isfinite(a))
            fail("alpha", "weights must be finite and >= 0");

    if (config.rx_regions.empty()) {
        const double side = 2.0 * config.wavelength;
        config.rx_regions.assign(K, Rect{0.0, 0.0, side, side});
    }
    if (config.rx_regions.size() != K)
        fail("rx_regions", "needs one rectangle per user");
    for (const Rect& r : config.rx_regions)
        if (!r.valid())
            fail("rx_regions", "rectangles must have xmax >= xmin, ymax >= ymin");

    // Confirms M points fit with spacing D regardless of mode.
    feasible_grid_layout(config.num_bs_antennas, config.tx_region, config.min_distance);

    if (config.mode == MovementMode::planar) {
        if (config.planar_cells.empty())
            config.planar_cells = make_planar_cells(
                config.tx_region, config.num_bs_antennas, config.min_distance);
        if (config.planar_cells.size() != static_cast<std::size_t>(config.num_bs_antennas))
            fail("planar_cells", "needs one cell per BS antenna");
        for (std::size_t m = 0; m < config.planar_cells.size(); ++m) {
            if (!config.planar_cells[m].valid())
                fail("planar_cells", "cell " + std::to_string(m) + " is not a rectangle");
            if (!config.tx_region.contains(config.planar_cells[m], 1e-12))
                fail("planar_cells",
                     "cell " + std::to_string(m) + " is not inside tx_region");
            for (std::size_t j = m + 1; j < config.planar_cells.size(); ++j)
                if (rect_distance(config.planar_cells[m], config.planar_cells[j]) <
                    config.min_distance - 1e-12)
                    fail("planar_cells", "cells " + std::to_string(m) + " and " +
                                             std::to_string(j) + " are closer than D");
        }
    } else {
        config.planar_cells.clear();
    }
}

ScenarioConfig config_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        fail("config", "top level must be a JSON object");

    ScenarioConfig c;
    if (j.contains("M"))
        c.num_bs_antennas = j.at("M").get<int>();
    if (j.contains("K"))
        c.num_users = j.at("K").get<int>();
    if (j.contains("L_tx"))
        c.num_tx_paths = int_list(j.at("L_tx"), "L_tx", std::max(1, c.num_users));
    if (j.contains("L_rx"))
        c.num_rx_paths = int_list(j.at("L_rx"), "L_rx", std::max(1, c.num_users));
    if (j.contains("lambda"))
        c.wavelength = j.at("lambda").get<double>();
    if (j.contains("D"))
        c.min_distance = j.at("D").get<double>();
    if (j.contains("tx_region"))
        c.tx_region = rect_from_json(j.at("tx_region"), "tx_region");
    if (j.contains("rx_regions")) {
        c.rx_regions.clear();
        for (const auto& r : j.at("rx_regions"))
            c.rx_regions.push_back(rect_from_json(r, "rx_regions"));
    }
    if (j.contains("sigma2") && j.contains("sigma2_dbm"))
        fail("sigma2", "give either sigma2 (linear) or sigma2_dbm, not both");
    if (j.contains("sigma2"))
        c.noise_power = j.at("sigma2").get<double>();
    if (j.contains("sigma2_dbm"))
        c.noise_power = dbm_to_linear(j.at("sigma2_dbm").get<double>());
    if (j.contains("p_max") && j.contains("p_max_dbm"))
        fail("p_max", "give either p_max (linear) or p_max_dbm, not both");
    if (j.contains("p_max"))
        c.max_power = j.at("p_max").get<double>();
    if (j.contains("p_max_dbm"))
        c.max_power = dbm_to_linear(j.at("p_max_dbm").get<double>());
    if (j.contains("alpha"))
        c.weights = j.at("alpha").get<std::vector<double>>();
    if (j.contains("mode"))
        c.mode = movement_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("planar_cells")) {
        c.planar_cells.clear();
        for (const auto& r : j.at("planar_cells"))
            c.planar_cells.push_back(rect_from_json(r, "planar_cells"));
    }
    if (j.contains("rng_seed"))
        c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    if (j.contains("path_gain_variance"))
        c.path_gain_variance = j.at("path_gain_variance").get<double>();
    if (j.contains("angle_min"))
        c.angle_min = j.at("angle_min").get<double>();
    if (j.contains("angle_max"))
        c.angle_max = j.at("angle_max").get<double>();
    if (j.contains("random_initial_positions"))
        c.random_initial_positions = j.at("random_initial_positions").get<bool>();

    validate_config(c);
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

std::string config_to_json(const ScenarioConfig& config) {
    json j;
    j["M"] = config.num_bs_antennas;
    j["K"] = config.num_users;
    j["L_tx"] = config.num_tx_paths;
    j["L_rx"] = config.num_rx_paths;
    j["lambda"] = config.wavelength;
    j["D"] = config.min_distance;
    j["tx_region"] = rect_to_json(config.tx_region);
    json rx = json::array();
    for (const Rect& r : config.rx_regions)
        rx.push_back(rect_to_json(r));
    j["rx_regions"] = rx;
    j["sigma2"] = config.noise_power;
    j["p_max"] = config.max_power;
    j["alpha"] = config.weights;
    j["mode"] = to_string(config.mode);
    if (!config.planar_cells.empty()) {
        json cells = json::array();
        for (const Rect& r : config.planar_cells)
            cells.push_back(rect_to_json(r));
        j["planar_cells"] = cells;
    }
    j["rng_seed"] = config.rng_seed;
    j["path_gain_variance"] = config.path_gain_variance;
    j["angle_min"] = config.angle_min;
    j["angle_max"] = config.angle_max;
    j["random_initial_positions"] = config.random_initial_positions;
    return j.dump(2);
}

void save_config(const ScenarioConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("config: cannot write file '" + path + "'");
    out << config_to_json(config) << '\n';
}

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::none: return "none";
        case SweepVariable::num_bs_antennas: return "M";
        case SweepVariable::min_distance: return "D";
        case SweepVariable::max_power: return "p_max";
    }
    return "none";
}

std::vector<ExperimentPreset> preset_figures() {
    ScenarioConfig base;  // defaults are already the reference setup
    base.num_tx_paths.assign(static_cast<std::size_t>(base.num_users), 4);
    base.num_rx_paths.assign(static_cast<std::size_t>(base.num_users), 4);

    ExperimentPreset convergence;
    convergence.name = "convergence";
    convergence.base = base;
    convergence.baselines = {"TMA-RMA"};
    convergence.modes = {MovementMode::general, MovementMode::planar};
    convergence.trials = 1;

    ExperimentPreset m_sweep;
    m_sweep.name = "m-sweep";
    m_sweep.base = base;
    m_sweep.sweep = SweepVariable::num_bs_antennas;
    m_sweep.sweep_values = {4.0, 8.0, 12.0, 16.0};
    m_sweep.baselines = {"TMA-RMA", "TFPA-RMA", "TMA-RFPA", "FPA"};
    m_sweep.modes = {MovementMode::general};
    m_sweep.trials = 5;

    ExperimentPreset d_sweep;
    d_sweep.name = "d-sweep";
    d_sweep.base = base;
    d_sweep.sweep = SweepVariable::min_distance;
    d_sweep.sweep_values = {0.25, 0.5, 0.75, 1.0};
    d_sweep.baselines = {"TMA-RMA"};
    d_sweep.modes = {MovementMode::general, MovementMode::planar};
    d_sweep.trials = 5;

    return {convergence, m_sweep, d_sweep};
}

ExperimentPreset find_preset(const std::string& name) {
    auto presets = preset_figures();
    std::string known;
    for (const auto& p : presets) {
        if (p.name == name)
            return p;
        known += (known.empty() ? "" : ", ") + p.name;
    }
    throw std::invalid_argument("preset: unknown name '" + name + "' (valid: " + known + ")");
}

std::vector<ScenarioConfig> expand_preset(const ExperimentPreset& preset) {
    std::vector<ScenarioConfig> configs;
    if (preset.sweep == SweepVariable::none) {
        ScenarioConfig c = preset.base;
        validate_config(c);
        configs.push_back(std::move(c));
        return configs;
    }
    for (std::size_t i = 0; i + 1 < preset.sweep_values.size(); ++i)
        if (!(preset.sweep_values[i] < preset.sweep_values[i + 1]))
            throw std::invalid_argument("preset: sweep values must be strictly increasing");
    for (double value : preset.sweep_values) {
        ScenarioConfig c = preset.base;
        switch (preset.sweep) {
            case SweepVariable::num_bs_antennas:
                c.num_bs_antennas = static_cast<int>(value);
                break;
            case SweepVariable::min_distance:
                c.min_distance = value;
                break;
            case SweepVariable::max_power:
                c.max_power = value;
                break;
            case SweepVariable::none:
                break;
        }
        c.planar_cells.clear();  // re-derive for the new geometry
        validate_config(c);
        configs.push_back(std::move(c));
    }
    return configs;
}

}  // namespace mamimo
