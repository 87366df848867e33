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

namespace mamimo::verify {

struct SuiteResult {
    std::string name;
    int passed = 0;
    int failed = 0;
    std::vector<std::string> failures;  ///< first few diagnostic lines

    bool ok() const { return failed == 0; }
};

/// Quadratic/linear-form bounds and surrogate majorization/tightness sampling.
SuiteResult run_surrogate_suite(int samples, std::uint64_t seed);

/// Analytic position gradients against central finite differences.
SuiteResult run_gradient_suite(int samples, std::uint64_t seed);

/// Per-block objective descent and per-iteration sum-rate ascent over full
/// seeded runs (samples = scenarios).
SuiteResult run_monotonicity_suite(int samples, std::uint64_t seed);

/// QP solver against exhaustive vertex/active-set enumeration.
SuiteResult run_qp_suite(int samples, std::uint64_t seed);

/// Single-antenna position descent against a dense objective grid
/// (samples = seeds).
SuiteResult run_grid_suite(int samples, std::uint64_t seed);

std::vector<std::string> suite_names();

/// Run one suite by name, or every suite for "all". Throws
/// std::invalid_argument for unknown names, listing the valid ones.
std::vector<SuiteResult> run_suites(const std::string& name, int samples,
                                    std::uint64_t seed);

}  // namespace mamimo::verify
