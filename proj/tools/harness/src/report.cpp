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

#include "twistlab/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace twistlab::harness {

using nlohmann::ordered_json;

bool ExperimentReport::passed() const {
    if (!error.empty()) return false;
    for (const auto& r : rows) {
        if (!r.pass) return false;
    }
    for (const auto& t : timings) {
        if (!t.pass) return false;
    }
    return true;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

std::string emit_csv(const std::vector<ExperimentReport>& reports) {
    std::ostringstream s;
    s << "experiment,criterion,measured,threshold,pass\n";
    for (const auto& rep : reports) {
        for (const auto& r : rep.rows) {
            s << rep.id << ',' << r.criterion << ',' << format_number(r.measured) << ',';
            if (r.informational) {
                s << ",info\n";
            } else {
                s << r.op << format_number(r.threshold) << ',' << (r.pass ? "true" : "false") << '\n';
            }
        }
    }
    return s.str();
}

namespace {

// JSON has no NaN or infinity; encode them as strings.
ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

double read_number(const ordered_json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::runtime_error("parse_json: bad number " + s);
    }
    return j.get<double>();
}

ordered_json to_object(const ExperimentReport& rep) {
    ordered_json j;
    j["id"] = rep.id;
    j["title"] = rep.title;
    ordered_json inputs = ordered_json::array();
    for (const auto& [k, v] : rep.inputs) inputs.push_back({{"key", k}, {"value", v}});
    j["inputs"] = inputs;
    ordered_json rows = ordered_json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"criterion", r.criterion},
                        {"measured", number(r.measured)},
                        {"threshold", number(r.threshold)},
                        {"op", r.op},
                        {"pass", r.pass},
                        {"informational", r.informational}});
    }
    j["rows"] = rows;
    ordered_json timings = ordered_json::array();
    for (const auto& t : rep.timings) {
        timings.push_back({{"name", t.name}, {"value", number(t.value)}, {"limit", number(t.limit)}, {"op", t.op}, {"pass", t.pass}});
    }
    j["timings"] = timings;
    ordered_json sweeps = ordered_json::object();
    for (const auto& [name, sw] : rep.sweeps) {
        ordered_json rowsj = ordered_json::array();
        for (const auto& row : sw.rows) {
            ordered_json rj = ordered_json::array();
            for (double v : row) rj.push_back(number(v));
            rowsj.push_back(rj);
        }
        sweeps[name] = {{"columns", sw.columns}, {"rows", rowsj}};
    }
    j["sweeps"] = sweeps;
    j["wall_time"] = number(rep.wall_time);
    j["error"] = rep.error;
    j["pass"] = rep.passed();
    return j;
}

ExperimentReport from_object(const ordered_json& j) {
    ExperimentReport rep;
    rep.id = j.at("id").get<std::string>();
    rep.title = j.at("title").get<std::string>();
    for (const auto& in : j.at("inputs")) rep.inputs.emplace_back(in.at("key").get<std::string>(), in.at("value").get<std::string>());
    for (const auto& r : j.at("rows")) {
        CriterionRow row;
        row.criterion = r.at("criterion").get<std::string>();
        row.measured = read_number(r.at("measured"));
        row.threshold = read_number(r.at("threshold"));
        row.op = r.at("op").get<std::string>();
        row.pass = r.at("pass").get<bool>();
        row.informational = r.at("informational").get<bool>();
        rep.rows.push_back(row);
    }
    for (const auto& t : j.at("timings")) {
        TimingCheck tc;
        tc.name = t.at("name").get<std::string>();
        tc.value = read_number(t.at("value"));
        tc.limit = read_number(t.at("limit"));
        tc.op = t.at("op").get<std::string>();
        tc.pass = t.at("pass").get<bool>();
        rep.timings.push_back(tc);
    }
    for (const auto& [name, sw] : j.at("sweeps").items()) {
        Sweep s;
        s.columns = sw.at("columns").get<std::vector<std::string>>();
        for (const auto& row : sw.at("rows")) {
            std::vector<double> values;
            for (const auto& v : row) values.push_back(read_number(v));
            s.rows.push_back(std::move(values));
        }
        rep.sweeps[name] = std::move(s);
    }
    rep.wall_time = read_number(j.at("wall_time"));
    rep.error = j.at("error").get<std::string>();
    return rep;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string emit_json(const ExperimentReport& report) { return to_object(report).dump(2) + "\n"; }

std::string emit_json(const std::vector<ExperimentReport>& reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_object(r));
    return arr.dump(2) + "\n";
}

ExperimentReport parse_json(const std::string& text) {
    try {
        return from_object(ordered_json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("parse_json: ") + e.what());
    }
}

std::string emit_sweep_csv(const Sweep& sweep) {
    std::ostringstream s;
    for (std::size_t c = 0; c < sweep.columns.size(); ++c) s << (c ? "," : "") << sweep.columns[c];
    s << '\n';
    for (const auto& row : sweep.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) s << (c ? "," : "") << format_number(row[c]);
        s << '\n';
    }
    return s.str();
}

void write_report_files(const ExperimentReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
    const fs::path base(dir);
    write_text(base / (report.id + ".csv"), emit_csv({report}));
    write_text(base / (report.id + ".json"), emit_json(report));
    for (const auto& [name, sw] : report.sweeps) write_text(base / (report.id + "_" + name + ".csv"), emit_sweep_csv(sw));
}

}  // namespace twistlab::harness
