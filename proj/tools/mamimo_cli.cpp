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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mamimo/driver.hpp"
#include "mamimo/report.hpp"
#include "mamimo/rng.hpp"
#include "mamimo/scenario.hpp"
#include "mamimo/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerification = 3;

struct RunFlags {
    std::string config_path;
    std::string preset_name;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int trials = 0;  // 0: keep the preset/default count
    std::string mode;
    std::vector<std::string> baselines;
};

struct RunGroup {
    mamimo::ScenarioConfig config;
    std::string sweep_variable = "none";
    double sweep_value = 0.0;
    std::vector<mamimo::BaselineKind> baselines;
    std::vector<mamimo::MovementMode> modes;
    int trials = 1;
};

std::vector<RunGroup> build_groups(const RunFlags& flags) {
    std::vector<RunGroup> groups;

    if (!flags.preset_name.empty()) {
        const mamimo::ExperimentPreset preset = mamimo::find_preset(flags.preset_name);
        const auto configs = mamimo::expand_preset(preset);
        for (std::size_t i = 0; i < configs.size(); ++i) {
            RunGroup group;
            group.config = configs[i];
            group.sweep_variable = mamimo::to_string(preset.sweep);
            group.sweep_value =
                preset.sweep == mamimo::SweepVariable::none ? 0.0 : preset.sweep_values[i];
            for (const auto& name : preset.baselines)
                group.baselines.push_back(mamimo::baseline_from_string(name));
            group.modes = preset.modes;
            group.trials = preset.trials;
            groups.push_back(std::move(group));
        }
    } else {
        RunGroup group;
        group.config = mamimo::load_config(flags.config_path);
        group.baselines = {mamimo::BaselineKind::TMA_RMA};
        group.modes = {group.config.mode};
        groups.push_back(std::move(group));
    }

    for (RunGroup& group : groups) {
        if (flags.seed_given)
            group.config.rng_seed = flags.seed;
        if (flags.trials > 0)
            group.trials = flags.trials;
        if (!flags.mode.empty())
            group.modes = {mamimo::movement_mode_from_string(flags.mode)};
        if (!flags.baselines.empty()) {
            group.baselines.clear();
            for (const auto& name : flags.baselines)
                group.baselines.push_back(mamimo::baseline_from_string(name));
        }
    }
    return groups;
}

bool is_scenario_archive(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        return false;
    nlohmann::json j;
    try {
        in >> j;
    } catch (...) {
        return false;
    }
    return j.is_object() && j.contains("scenarios");
}

// Re-runs archived scenarios exactly as drawn.
int cmd_replay(const RunFlags& flags) {
    namespace fs = std::filesystem;
    if (flags.seed_given || flags.trials > 0 || !flags.mode.empty()) {
        std::cerr << "error: --seed/--trials/--mode cannot be combined with a "
                     "scenario archive (replay is exact)\n";
        return kExitUsage;
    }

    std::vector<mamimo::BaselineKind> baselines{mamimo::BaselineKind::TMA_RMA};
    try {
        if (!flags.baselines.empty()) {
            baselines.clear();
            for (const auto& name : flags.baselines)
                baselines.push_back(mamimo::baseline_from_string(name));
        }
        fs::create_directories(flags.out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (configuration): " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error (output directory): " << e.what() << '\n';
        return kExitRuntime;
    }

    std::vector<mamimo::report::OutputRecord> trace;
    std::vector<mamimo::report::RunSummary> summaries;
    std::vector<mamimo::report::ArchivedScenario> archive;
    try {
        const auto entries = mamimo::report::load_scenario_archive(flags.config_path);
        int run_id = 0;
        for (const auto& entry : entries) {
            for (mamimo::BaselineKind baseline : baselines) {
                const auto report =
                    mamimo::driver::run_bcd(entry.scenario, entry.config, baseline);
                const auto records = mamimo::report::records_from_run(
                    report, run_id, mamimo::to_string(baseline),
                    mamimo::to_string(entry.config.mode), "none", 0.0, 0);
                trace.insert(trace.end(), records.begin(), records.end());
                archive.push_back({run_id, entry.config, entry.scenario});

                mamimo::report::RunSummary summary;
                summary.baseline = mamimo::to_string(baseline);
                summary.mode = mamimo::to_string(entry.config.mode);
                summary.trials = 1;
                summary.final_wsr_nats =
                    mamimo::driver::aggregate({report.final_wsr_nats()});
                summary.total_ms = mamimo::driver::aggregate({report.total_ms});
                summary.iterations = mamimo::driver::aggregate(
                    {static_cast<double>(report.iterations.size())});
                summary.converged_trials = report.converged ? 1 : 0;
                summaries.push_back(std::move(summary));
                ++run_id;
            }
        }
        const fs::path out(flags.out_dir);
        mamimo::report::write_trace_csv((out / "trace.csv").string(), trace);
        mamimo::report::write_timings_csv((out / "timings.csv").string(), trace);
        mamimo::report::write_summary_json((out / "summary.json").string(), summaries);
        mamimo::report::write_scenario_archive((out / "scenario.json").string(), archive);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (scenario archive): " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error (replay run): " << e.what() << '\n';
        return kExitRuntime;
    }

    std::printf("replayed %zu archived scenario(s), wrote %zu trace rows to %s\n",
                archive.size() / baselines.size(), trace.size(), flags.out_dir.c_str());
    return kExitOk;
}

int cmd_run(const RunFlags& flags) {
    namespace fs = std::filesystem;

    if (!flags.config_path.empty() && is_scenario_archive(flags.config_path))
        return cmd_replay(flags);

    std::vector<RunGroup> groups;
    try {
        groups = build_groups(flags);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (configuration): " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        fs::create_directories(flags.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error (output directory): " << e.what() << '\n';
        return kExitRuntime;
    }

    std::vector<mamimo::report::OutputRecord> trace;
    std::vector<mamimo::report::RunSummary> summaries;
    std::vector<mamimo::report::ArchivedScenario> archive;
    int run_id = 0;

    try {
        for (const RunGroup& group : groups) {
            for (mamimo::MovementMode mode : group.modes) {
                mamimo::ScenarioConfig config = group.config;
                if (mode != config.mode) {
                    config.mode = mode;
                    config.planar_cells.clear();  // re-derive for the new mode
                }
                mamimo::validate_config(config);

                for (mamimo::BaselineKind baseline : group.baselines) {
                    std::vector<double> wsr_values, total_ms, bs_ms, iteration_counts;
                    int converged = 0;
                    for (int trial = 0; trial < group.trials; ++trial) {
                        mamimo::ScenarioConfig trial_config = config;
                        trial_config.rng_seed = mamimo::Rng::derive_seed(
                            config.rng_seed, static_cast<std::uint64_t>(trial));
                        const mamimo::Scenario scenario =
                            mamimo::channel::generate_scenario(trial_config);
                        const auto report = mamimo::driver::run_bcd(scenario, trial_config,
                                                                    baseline);

                        const auto records = mamimo::report::records_from_run(
                            report, run_id, mamimo::to_string(baseline),
                            mamimo::to_string(mode), group.sweep_variable,
                            group.sweep_value, trial);
                        trace.insert(trace.end(), records.begin(), records.end());
                        archive.push_back({run_id, trial_config, scenario});

                        wsr_values.push_back(report.final_wsr_nats());
                        total_ms.push_back(report.total_ms);
                        iteration_counts.push_back(
                            static_cast<double>(report.iterations.size()));
                        double block_ms = 0.0;
                        int counted = 0;
                        for (const auto& it : report.iterations)
                            if (it.iteration > 0) {
                                block_ms += it.bs_position_ms;
                                ++counted;
                            }
                        bs_ms.push_back(counted > 0 ? block_ms / counted : 0.0);
                        if (report.converged)
                            ++converged;
                        ++run_id;
                    }

                    mamimo::report::RunSummary summary;
                    summary.baseline = mamimo::to_string(baseline);
                    summary.mode = mamimo::to_string(mode);
                    summary.sweep_variable = group.sweep_variable;
                    summary.sweep_value = group.sweep_value;
                    summary.trials = group.trials;
                    summary.final_wsr_nats = mamimo::driver::aggregate(wsr_values);
                    summary.total_ms = mamimo::driver::aggregate(total_ms);
                    summary.mean_bs_block_ms = mamimo::driver::aggregate(bs_ms);
                    summary.iterations = mamimo::driver::aggregate(iteration_counts);
                    summary.converged_trials = converged;
                    summaries.push_back(std::move(summary));
                }
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error (optimization run): " << e.what() << '\n';
        return kExitRuntime;
    }

    try {
        const fs::path out(flags.out_dir);
        mamimo::report::write_trace_csv((out / "trace.csv").string(), trace);
        mamimo::report::write_timings_csv((out / "timings.csv").string(), trace);
        mamimo::report::write_summary_json((out / "summary.json").string(), summaries);
        mamimo::report::write_scenario_archive((out / "scenario.json").string(), archive);
    } catch (const std::exception& e) {
        std::cerr << "error (writing outputs): " << e.what() << '\n';
        return kExitRuntime;
    }

    for (const auto& s : summaries)
        std::printf("%-9s %-8s %s=%-6g wsr %.4f nats (%.4f bits), %d/%d converged\n",
                    s.baseline.c_str(), s.mode.c_str(), s.sweep_variable.c_str(),
                    s.sweep_value, s.final_wsr_nats.mean, s.final_wsr_nats.mean / M_LN2,
                    s.converged_trials, s.trials);
    std::printf("wrote %zu trace rows to %s\n", trace.size(), flags.out_dir.c_str());
    return kExitOk;
}

int cmd_verify(const std::string& suite, int samples, std::uint64_t seed) {
    std::vector<mamimo::verify::SuiteResult> results;
    try {
        results = mamimo::verify::run_suites(suite, samples, seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error (verification run): " << e.what() << '\n';
        return kExitRuntime;
    }

    bool all_ok = true;
    for (const auto& r : results) {
        std::printf("%-24s %d/%d passed%s\n", r.name.c_str(), r.passed,
                    r.passed + r.failed, r.ok() ? "" : "  [FAIL]");
        for (const auto& f : r.failures)
            std::printf("    %s\n", f.c_str());
        all_ok &= r.ok();
    }
    return all_ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"movable-antenna multiuser MIMO downlink optimizer"};
    app.require_subcommand(1);

    RunFlags flags;
    auto* run = app.add_subcommand("run", "run a preset or a custom config");
    auto* config_opt =
        run->add_option("--config", flags.config_path, "path to a scenario config JSON");
    auto* preset_opt =
        run->add_option("--preset", flags.preset_name, "preset name (see README)");
    config_opt->excludes(preset_opt);
    run->add_option("--out", flags.out_dir, "output directory")->capture_default_str();
    auto* seed_opt = run->add_option("--seed", flags.seed, "base RNG seed");
    run->add_option("--trials", flags.trials, "trials per run group");
    run->add_option("--mode", flags.mode, "movement mode: general or planar");
    run->add_option("--baseline", flags.baselines,
                    "baseline name (repeatable): TMA-RMA, TFPA-RMA, TMA-RFPA, FPA");

    std::string suite = "all";
    int samples = 1000;
    std::uint64_t verify_seed = 1;
    auto* verify = app.add_subcommand("verify", "run the built-in property suites");
    verify->add_option("--suite", suite, "suite name or 'all'")->capture_default_str();
    verify->add_option("--samples", samples, "sample count per suite")
        ->capture_default_str();
    verify->add_option("--seed", verify_seed, "RNG seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (run->parsed()) {
        if (flags.config_path.empty() && flags.preset_name.empty()) {
            std::cerr << "error: run needs --config PATH or --preset NAME\n";
            return kExitUsage;
        }
        flags.seed_given = seed_opt->count() > 0;
        return cmd_run(flags);
    }
    return cmd_verify(suite, samples, verify_seed);
}
