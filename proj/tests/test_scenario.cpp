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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mamimo/channel.hpp"
#include "mamimo/driver.hpp"
#include "mamimo/report.hpp"
#include "mamimo/scenario.hpp"

using namespace mamimo;
using doctest::Approx;

namespace {

std::string write_temp(const std::string& text) {
    static int counter = 0;
    const auto path = std::filesystem::temp_directory_path() /
                      ("mamimo_test_" + std::to_string(counter++) + ".json");
    std::ofstream out(path);
    out << text;
    return path.string();
}

}  // namespace

TEST_CASE("defaults match the reference setup") {
    const ScenarioConfig c = config_from_json("{}");
    CHECK(c.num_bs_antennas == 16);
    CHECK(c.wavelength == 1.0);
    CHECK(c.min_distance == Approx(0.5));
    CHECK(c.tx_region.width() == Approx(5.0));
    CHECK(c.tx_region.height() == Approx(5.0));
    CHECK(c.noise_power == Approx(dbm_to_linear(15.0)).epsilon(1e-12));
    CHECK(c.max_power == Approx(dbm_to_linear(30.0)).epsilon(1e-12));
    CHECK(c.num_users == 4);
    CHECK(c.weights == std::vector<double>(4, 1.0));
    CHECK(c.num_tx_paths == std::vector<int>(4, 4));
}

TEST_CASE("dBm conversion") {
    CHECK(dbm_to_linear(30.0) == Approx(1.0));
    CHECK(dbm_to_linear(15.0) == Approx(0.0316227766016838).epsilon(1e-12));
    CHECK(dbm_to_linear(0.0) == Approx(1e-3));
    CHECK(linear_to_dbm(dbm_to_linear(17.5)) == Approx(17.5).epsilon(1e-12));
}

TEST_CASE("validation names the offending field") {
    SUBCASE("spacing larger than the region diagonal") {
        ScenarioConfig c;
        c.min_distance = 100.0;
        CHECK_THROWS_WITH_AS(validate_config(c),
                             doctest::Contains("D:"), std::invalid_argument);
    }
    SUBCASE("bad noise power") {
        ScenarioConfig c;
        c.noise_power = 0.0;
        CHECK_THROWS_WITH_AS(validate_config(c),
                             doctest::Contains("sigma2"), std::invalid_argument);
    }
    SUBCASE("negative weights") {
        ScenarioConfig c;
        c.weights = {1.0, -0.5, 1.0, 1.0};
        CHECK_THROWS_WITH_AS(validate_config(c),
                             doctest::Contains("alpha"), std::invalid_argument);
    }
    SUBCASE("wrong per-user vector lengths") {
        ScenarioConfig c;
        c.num_users = 3;
        c.num_tx_paths = {4, 4};
        CHECK_THROWS_WITH_AS(validate_config(c),
                             doctest::Contains("L_tx"), std::invalid_argument);
    }
    SUBCASE("malformed json") {
        CHECK_THROWS_AS(config_from_json("{"), std::invalid_argument);
    }
    SUBCASE("conflicting power fields") {
        CHECK_THROWS_WITH_AS(config_from_json(R"({"sigma2": 1.0, "sigma2_dbm": 15})"),
                             doctest::Contains("sigma2"), std::invalid_argument);
    }
}

TEST_CASE("config save/load round trip") {
    ScenarioConfig c;
    c.num_bs_antennas = 9;
    c.num_users = 2;
    c.num_tx_paths = {3, 5};
    c.num_rx_paths = {2, 2};
    c.min_distance = 0.35;
    c.weights = {1.5, 0.5};
    c.mode = MovementMode::planar;
    c.rng_seed = 99;
    validate_config(c);

    const std::string path = write_temp(config_to_json(c));
    const ScenarioConfig loaded = load_config(path);
    CHECK(loaded.num_bs_antennas == c.num_bs_antennas);
    CHECK(loaded.num_tx_paths == c.num_tx_paths);
    CHECK(loaded.min_distance == c.min_distance);
    CHECK(loaded.weights == c.weights);
    CHECK(loaded.mode == c.mode);
    CHECK(loaded.rng_seed == c.rng_seed);
    CHECK(loaded.planar_cells.size() == c.planar_cells.size());
    for (std::size_t i = 0; i < c.planar_cells.size(); ++i) {
        CHECK(loaded.planar_cells[i].xmin == c.planar_cells[i].xmin);
        CHECK(loaded.planar_cells[i].ymax == c.planar_cells[i].ymax);
    }
    CHECK(config_to_json(loaded) == config_to_json(c));
    std::filesystem::remove(path);
}

TEST_CASE("missing config file is reported with its path") {
    CHECK_THROWS_WITH_AS(load_config("/nonexistent/dir/config.json"),
                         doctest::Contains("/nonexistent/dir/config.json"),
                         std::invalid_argument);
}

TEST_CASE("planar cell partition") {
    SUBCASE("reference geometry gives a 4x4 grid with spacing-wide gaps") {
        const Rect region{0.0, 0.0, 5.0, 5.0};
        const auto cells = make_planar_cells(region, 16, 0.5);
        REQUIRE(cells.size() == 16);
        CHECK(cells[0].width() == Approx((5.0 - 3 * 0.5) / 4.0));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            CHECK(region.contains(cells[i], 1e-12));
            for (std::size_t j = i + 1; j < cells.size(); ++j)
                CHECK(rect_distance(cells[i], cells[j]) >= 0.5 - 1e-12);
        }
    }
    SUBCASE("cells that are too close are rejected") {
        ScenarioConfig c;
        c.num_bs_antennas = 2;
        c.mode = MovementMode::planar;
        c.planar_cells = {Rect{0.0, 0.0, 1.0, 1.0}, Rect{1.1, 0.0, 2.0, 1.0}};
        CHECK_THROWS_WITH_AS(validate_config(c),
                             doctest::Contains("planar_cells"), std::invalid_argument);
    }
    SUBCASE("rectangle distance") {
        CHECK(rect_distance({0, 0, 1, 1}, {2, 0, 3, 1}) == Approx(1.0));
        CHECK(rect_distance({0, 0, 1, 1}, {2, 2, 3, 3}) == Approx(std::sqrt(2.0)));
        CHECK(rect_distance({0, 0, 2, 2}, {1, 1, 3, 3}) == 0.0);
    }
}

TEST_CASE("grid layout feasibility") {
    CHECK_THROWS_AS(feasible_grid_layout(50, Rect{0.0, 0.0, 1.0, 1.0}, 0.5),
                    std::invalid_argument);
    const GridLayout layout = feasible_grid_layout(16, Rect{0.0, 0.0, 5.0, 5.0}, 0.5);
    CHECK(layout.cols == 4);
    CHECK(layout.rows == 4);
    const GridLayout narrow = feasible_grid_layout(4, Rect{0.0, 0.0, 0.1, 10.0}, 1.0);
    CHECK(narrow.cols == 1);
    CHECK(narrow.rows == 4);
}

TEST_CASE("presets") {
    const auto presets = preset_figures();
    REQUIRE(presets.size() == 3);
    CHECK(presets[0].name == "convergence");
    CHECK(presets[1].name == "m-sweep");
    CHECK(presets[2].name == "d-sweep");

    SUBCASE("the antenna sweep carries all four baselines") {
        const auto& sweep = find_preset("m-sweep");
        CHECK(sweep.baselines.size() == 4);
        for (const char* name : {"TMA-RMA", "TFPA-RMA", "TMA-RFPA", "FPA"})
            CHECK(std::find(sweep.baselines.begin(), sweep.baselines.end(),
                            std::string(name)) != sweep.baselines.end());
        const auto configs = expand_preset(sweep);
        REQUIRE(configs.size() == sweep.sweep_values.size());
        for (std::size_t i = 0; i < configs.size(); ++i)
            CHECK(configs[i].num_bs_antennas ==
                  static_cast<int>(sweep.sweep_values[i]));
    }
    SUBCASE("the spacing sweep includes half a wavelength") {
        const auto& sweep = find_preset("d-sweep");
        CHECK(std::find(sweep.sweep_values.begin(), sweep.sweep_values.end(), 0.5) !=
              sweep.sweep_values.end());
        for (std::size_t i = 0; i + 1 < sweep.sweep_values.size(); ++i)
            CHECK(sweep.sweep_values[i] < sweep.sweep_values[i + 1]);
    }
    SUBCASE("the convergence preset runs both movement modes") {
        const auto& conv = find_preset("convergence");
        CHECK(conv.modes.size() == 2);
    }
    SUBCASE("every expanded config validates") {
        for (const auto& preset : presets)
            for (auto config : expand_preset(preset))
                CHECK_NOTHROW(validate_config(config));
    }
    SUBCASE("unknown names list the valid ones") {
        CHECK_THROWS_WITH_AS(find_preset("bogus"), doctest::Contains("convergence"),
                             std::invalid_argument);
    }
}

TEST_CASE("scenario archive round trip reproduces the geometry exactly") {
    ScenarioConfig config;
    config.num_bs_antennas = 4;
    config.num_users = 2;
    config.num_tx_paths = {3, 2};
    config.num_rx_paths = {2, 4};
    config.rng_seed = 1234;
    validate_config(config);
    const Scenario scenario = channel::generate_scenario(config);

    const auto path = std::filesystem::temp_directory_path() / "mamimo_archive.json";
    report::write_scenario_archive(path.string(), {{7, config, scenario}});
    const auto loaded = report::load_scenario_archive(path.string());
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].run_id == 7);
    CHECK(loaded[0].config.rng_seed == config.rng_seed);
    REQUIRE(loaded[0].scenario.geometry.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        const auto& a = scenario.geometry[k];
        const auto& b = loaded[0].scenario.geometry[k];
        CHECK(a.path_response == b.path_response);
        CHECK(a.theta_tx == b.theta_tx);
        CHECK((a.dirs_rx - b.dirs_rx).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(loaded[0].scenario.initial_positions.bs == scenario.initial_positions.bs);
    std::filesystem::remove(path);
}

TEST_CASE("trace records carry both rate units") {
    driver::RunReport run;
    driver::IterationRecord it;
    it.iteration = 0;
    it.wsr_nats = 3.0;
    run.iterations.push_back(it);
    it.iteration = 1;
    it.wsr_nats = 4.5;
    run.iterations.push_back(it);
    const auto records =
        report::records_from_run(run, 2, "FPA", "general", "none", 0.0, 0);
    REQUIRE(records.size() == 2);
    CHECK(records[0].wsr_bits == Approx(3.0 / std::log(2.0)).epsilon(1e-15));
    CHECK(records[1].wsr_bits == Approx(4.5 / std::log(2.0)).epsilon(1e-15));
    CHECK(records[0].warmup);
    CHECK_FALSE(records[1].warmup);
    CHECK(records[0].run_id == 2);
}

TEST_CASE("replaying an archived scenario reproduces the run") {
    ScenarioConfig config;
    config.num_bs_antennas = 4;
    config.num_users = 2;
    config.num_tx_paths = {3, 3};
    config.num_rx_paths = {3, 3};
    config.rng_seed = 555;
    validate_config(config);
    const Scenario scenario = channel::generate_scenario(config);

    const auto path = std::filesystem::temp_directory_path() / "mamimo_replay.json";
    report::write_scenario_archive(path.string(), {{0, config, scenario}});
    const auto loaded = report::load_scenario_archive(path.string());

    driver::DriverOptions options;
    options.max_outer_iters = 12;
    const auto original =
        driver::run_bcd(scenario, config, BaselineKind::TMA_RMA, options);
    const auto replayed = driver::run_bcd(loaded[0].scenario, loaded[0].config,
                                          BaselineKind::TMA_RMA, options);
    REQUIRE(original.iterations.size() == replayed.iterations.size());
    for (std::size_t i = 0; i < original.iterations.size(); ++i) {
        CHECK(original.iterations[i].wsr_nats == replayed.iterations[i].wsr_nats);
        CHECK(original.iterations[i].objective == replayed.iterations[i].objective);
    }
    std::filesystem::remove(path);
}
