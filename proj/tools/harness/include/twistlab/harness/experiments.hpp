/*
 * Copyright 2026 The twistlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "twistlab/harness/config.hpp"
#include "twistlab/harness/report.hpp"

#include <string>
#include <vector>

namespace twistlab::harness {

// A registered criterion. Rows carry the base name plus an optional
// suffix such as "_j6"; threshold overrides apply to the base name.
struct CriterionDef {
    std::string experiment;
    std::string base;
    std::string op;  // "<", "<=", ">"
    double threshold = 0.0;
    int acceptance = 0;  // acceptance criterion number 1..15
    bool timing = false;
    std::string description;
};

const std::vector<CriterionDef>& criterion_registry();
const CriterionDef* find_criterion(const std::string& base);

// Validates threshold overrides: names must be registered, and a looser
// value than the default requires allow_loosen.
void check_thresholds(const ExperimentConfig& cfg);

// Runs one experiment. Module failures are recorded in report.error and
// the rows measured so far are preserved.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Process exit code for a set of reports: 0 all pass, 1 otherwise.
int exit_code(const std::vector<ExperimentReport>& reports);

// Basis cache directory from the config or TWISTLAB_CACHE.
std::string cache_directory(const ExperimentConfig& cfg);

}  // namespace twistlab::harness
