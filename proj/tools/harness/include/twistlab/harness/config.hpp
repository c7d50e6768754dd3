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

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistlab::harness {

// Invalid configuration: unknown key, malformed value, unknown experiment.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fixed experiment registry.
const std::vector<std::string>& experiment_ids();
bool is_experiment_id(const std::string& id);
std::string experiment_title(const std::string& id);

// Parameters of one run. Unset optionals fall back to per-experiment
// defaults, so one config file can drive every experiment.
struct ExperimentConfig {
    std::string id;
    int n = 1;
    std::optional<int> M;
    std::optional<double> L;
    std::optional<int> K_max;
    std::optional<std::vector<double>> p;
    std::optional<double> sigma;
    std::optional<std::vector<double>> radii;
    std::optional<std::vector<int>> j;
    std::optional<std::vector<int>> remainder_j;
    std::optional<std::vector<int>> route_j;
    std::optional<std::vector<double>> delta;
    std::optional<std::vector<double>> tau;
    std::optional<double> t;
    std::optional<int> trials;
    std::optional<int> points;
    unsigned long long seed = 20240601ULL;
    int workers = 0;  // 0: hardware concurrency
    std::string out;  // output directory, empty: no files
    std::string cache;  // basis cache directory, empty: none
    std::map<std::string, double> thresholds;  // criterion name -> override
    bool allow_loosen = false;
};

// Documented keys with a one-line description each.
const std::vector<std::pair<std::string, std::string>>& documented_keys();

// Parses "key = value" lines; '#' starts a comment. Lists are comma
// separated. Unknown keys, duplicates and malformed values raise ConfigError.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig parse_config_file(const std::string& path);

// Structural checks that do not depend on the experiment.
void validate(const ExperimentConfig& cfg);

}  // namespace twistlab::harness
