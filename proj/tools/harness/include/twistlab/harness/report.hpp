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
#include <string>
#include <utility>
#include <vector>

namespace twistlab::harness {

// One row of the report: measured value compared against a threshold.
// Informational rows carry no threshold and never fail.
struct CriterionRow {
    std::string criterion;
    double measured = 0.0;
    double threshold = 0.0;
    std::string op;  // "<", "<=", ">" or empty for informational rows
    bool pass = true;
    bool informational = false;

    bool operator==(const CriterionRow&) const = default;
};

// Wall-clock budgets. Kept apart from the rows so that the CSV stays
// byte-identical between runs of the same config.
struct TimingCheck {
    std::string name;
    double value = 0.0;  // seconds, or a speedup factor
    double limit = 0.0;
    std::string op;  // "<" for budgets, ">" for speedups
    bool pass = true;

    bool operator==(const TimingCheck&) const = default;
};

// Plot-ready table, e.g. radius against norm.
struct Sweep {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool operator==(const Sweep&) const = default;
};

struct ExperimentReport {
    std::string id;
    std::string title;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<CriterionRow> rows;
    std::vector<TimingCheck> timings;
    std::map<std::string, Sweep> sweeps;
    double wall_time = 0.0;
    std::string error;  // non-empty when a module failed; rows so far are kept

    bool passed() const;
    bool operator==(const ExperimentReport&) const = default;
};

// Fixed number formatting shared by all writers.
std::string format_number(double v);

// Header "experiment,criterion,measured,threshold,pass" and one line per row.
std::string emit_csv(const std::vector<ExperimentReport>& reports);
std::string emit_json(const ExperimentReport& report);
std::string emit_json(const std::vector<ExperimentReport>& reports);
ExperimentReport parse_json(const std::string& text);
std::string emit_sweep_csv(const Sweep& sweep);

// Writes <dir>/<id>.csv, <dir>/<id>.json and <dir>/<id>_<sweep>.csv.
void write_report_files(const ExperimentReport& report, const std::string& dir);

}  // namespace twistlab::harness
