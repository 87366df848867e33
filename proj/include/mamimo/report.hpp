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

#include <string>
#include <vector>

#include "mamimo/driver.hpp"
#include "mamimo/scenario.hpp"

namespace mamimo::report {

/// One trace row per iteration per run. The deterministic quantities go to
/// trace.csv; the wall-clock block timings for the same (run_id, iteration)
/// go to timings.csv so trace.csv is byte-identical across repeated runs.
struct OutputRecord {
    int run_id = 0;
    std::string baseline;
    std::string mode;
    std::string sweep_variable = "none";
    double sweep_value = 0.0;
    int trial = 0;
    int iteration = 0;
    double wsr_nats = 0.0;
    double wsr_bits = 0.0;
    double wmmse_objective = 0.0;
    double max_distance_residual = 0.0;
    double power_residual = 0.0;
    double beamforming_ms = 0.0;
    double bs_position_ms = 0.0;
    double user_position_ms = 0.0;
    bool warmup = false;  ///< first iteration; excluded from timing means
};

/// Aggregated outcome of one (config, baseline, mode) group.
struct RunSummary {
    std::string baseline;
    std::string mode;
    std::string sweep_variable = "none";
    double sweep_value = 0.0;
    int trials = 0;
    driver::Aggregate final_wsr_nats;
    driver::Aggregate total_ms;
    driver::Aggregate mean_bs_block_ms;
    driver::Aggregate iterations;
    int converged_trials = 0;
};

std::vector<OutputRecord> records_from_run(const driver::RunReport& run, int run_id,
                                           const std::string& baseline,
                                           const std::string& mode,
                                           const std::string& sweep_variable,
                                           double sweep_value, int trial);

/// trace.csv: fixed column set, full round-trip (%.17g) formatting.
void write_trace_csv(const std::string& path, const std::vector<OutputRecord>& records);

/// timings.csv: wall-clock per block, keyed by (run_id, iteration).
void write_timings_csv(const std::string& path, const std::vector<OutputRecord>& records);

/// summary.json: one entry per run group.
void write_summary_json(const std::string& path, const std::vector<RunSummary>& summaries);

/// Scenario archive entry: everything needed to replay a run exactly
/// (config plus drawn angles, direction vectors and path-response matrices,
/// complex values stored as [re, im] pairs).
struct ArchivedScenario {
    int run_id = 0;
    ScenarioConfig config;
    Scenario scenario;
};

void write_scenario_archive(const std::string& path,
                            const std::vector<ArchivedScenario>& archive);
std::vector<ArchivedScenario> load_scenario_archive(const std::string& path);

}  // namespace mamimo::report
