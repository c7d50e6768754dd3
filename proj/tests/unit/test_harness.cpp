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

#include "twistlab/harness/config.hpp"
#include "twistlab/harness/experiments.hpp"
#include "twistlab/harness/report.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

using namespace twistlab::harness;

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse_config_text(
        "# comment\n"
        "experiment = E6\n"
        "M = 64   # trailing comment\n"
        "L = 12.5\n"
        "p = 1, 2/3, 1/2\n"
        "radii = 8,4\n"
        "j = 6, 7\n"
        "seed = 7\n"
        "threshold.atom_failures = 0\n");
    CHECK(c.id == "E6");
    CHECK(*c.M == 64);
    CHECK(*c.L == doctest::Approx(12.5));
    REQUIRE(c.p->size() == 3);
    CHECK((*c.p)[1] == doctest::Approx(2.0 / 3.0));
    CHECK(c.radii->size() == 2);
    CHECK(*c.j == std::vector<int>{6, 7});
    CHECK(c.seed == 7);
    CHECK(c.thresholds.at("atom_failures") == 0.0);
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config_text("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("M = 64\nM = 32\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("M = sixty\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("M 64\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("p = 1,,2\n"), ConfigError);
    ExperimentConfig c;
    c.id = "E1";
    c.M = 100;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.M = 64;
    c.p = std::vector<double>{1.5};
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.p.reset();
    c.n = 2;
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/twistlab.cfg"), ConfigError);
}

TEST_CASE("every documented key except placeholders parses") {
    for (const auto& [key, doc] : documented_keys()) {
        CHECK_FALSE(doc.empty());
        if (key.find('<') != std::string::npos) continue;
        std::string value = "1";
        if (key == "experiment") value = "E2";
        if (key == "M") value = "64";
        if (key == "out" || key == "cache") value = "/tmp/x";
        if (key == "allow_loosen") value = "true";
        CHECK_NOTHROW(parse_config_text(key + " = " + value + "\n"));
    }
}

TEST_CASE("experiment registry") {
    CHECK(experiment_ids().size() == 10);
    CHECK(is_experiment_id("E10"));
    CHECK_FALSE(is_experiment_id("E11"));
    std::set<int> covered;
    for (const auto& c : criterion_registry()) {
        CHECK(is_experiment_id(c.experiment));
        CHECK(find_criterion(c.base) == &c);
        covered.insert(c.acceptance);
    }
    for (int k = 1; k <= 15; ++k) CHECK(covered.count(k) == 1);
}

TEST_CASE("threshold overrides may tighten but not loosen by default") {
    ExperimentConfig c;
    c.id = "E2";
    c.thresholds["eigen_rel_max"] = 1e-6;
    CHECK_NOTHROW(check_thresholds(c));
    c.thresholds["eigen_rel_max"] = 1e-2;
    CHECK_THROWS_AS(check_thresholds(c), ConfigError);
    c.allow_loosen = true;
    CHECK_NOTHROW(check_thresholds(c));
    c.thresholds["no_such_criterion"] = 1.0;
    CHECK_THROWS_AS(check_thresholds(c), ConfigError);
    ExperimentConfig s;
    s.thresholds["fastconv_speedup_M64"] = 5.0;
    CHECK_THROWS_AS(check_thresholds(s), ConfigError);
}

TEST_CASE("unknown experiment is a configuration error") {
    ExperimentConfig c;
    c.id = "E42";
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("cache directory resolution") {
    ExperimentConfig c;
    c.cache = "/tmp/from-config";
    CHECK(cache_directory(c) == "/tmp/from-config");
    c.cache.clear();
    setenv("TWISTLAB_CACHE", "/tmp/from-env", 1);
    CHECK(cache_directory(c) == "/tmp/from-env");
    unsetenv("TWISTLAB_CACHE");
    CHECK(cache_directory(c).empty());
}

namespace {

ExperimentReport sample_report() {
    ExperimentReport r;
    r.id = "E9";
    r.title = "demo";
    r.inputs = {{"M", "64"}, {"p", "0.5"}};
    r.rows.push_back({"a_rel", 1.25e-5, 1e-3, "<", true, false});
    r.rows.push_back({"b_count", 3.0, 0.0, "<=", false, false});
    r.rows.push_back({"note", std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), "", true, true});
    r.timings.push_back({"runtime_s", 1.5, 60.0, "<", true});
    r.sweeps["curve"] = Sweep{{"r", "norm"}, {{1.0, 0.5}, {0.5, std::numeric_limits<double>::infinity()}}};
    r.wall_time = 2.0;
    return r;
}

}  // namespace

TEST_CASE("CSV output") {
    CHECK(emit_csv({}) == "experiment,criterion,measured,threshold,pass\n");
    const std::string csv = emit_csv({sample_report()});
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);
    CHECK(lines[1] == "E9,a_rel," + format_number(1.25e-5) + ",<" + format_number(1e-3) + ",true");
    CHECK(lines[2].ends_with(",false"));
    CHECK(lines[3].ends_with(",info"));
    CHECK(emit_csv({sample_report()}) == csv);
}

TEST_CASE("report pass logic") {
    ExperimentReport r = sample_report();
    CHECK_FALSE(r.passed());
    r.rows[1].pass = true;
    CHECK(r.passed());
    r.timings[0].pass = false;
    CHECK_FALSE(r.passed());
    r.timings[0].pass = true;
    r.error = "boom";
    CHECK_FALSE(r.passed());
    CHECK(exit_code({}) == 0);
    CHECK(exit_code({r}) == 1);
}

TEST_CASE("JSON round trip") {
    const ExperimentReport r = sample_report();
    const ExperimentReport back = parse_json(emit_json(r));
    CHECK(back.id == r.id);
    CHECK(back.inputs == r.inputs);
    CHECK(back.rows.size() == r.rows.size());
    CHECK(back.rows[0] == r.rows[0]);
    CHECK(std::isnan(back.rows[2].measured));
    CHECK(back.timings == r.timings);
    CHECK(std::isinf(back.sweeps.at("curve").rows[1][1]));
    CHECK(emit_json(back) == emit_json(r));
    ExperimentReport empty;
    CHECK(parse_json(emit_json(empty)) == empty);
}

TEST_CASE("report files") {
    const auto dir = std::filesystem::temp_directory_path() / "twistlab_test_reports";
    std::filesystem::remove_all(dir);
    write_report_files(sample_report(), dir.string());
    CHECK(std::filesystem::exists(dir / "E9.csv"));
    CHECK(std::filesystem::exists(dir / "E9.json"));
    std::ifstream sweep(dir / "E9_curve.csv");
    std::string header;
    std::getline(sweep, header);
    CHECK(header == "r,norm");
    std::filesystem::remove_all(dir);
}

TEST_CASE("a small experiment is deterministic") {
    ExperimentConfig c;
    c.id = "E2";
    c.M = 64;
    c.L = 12.0;
    const ExperimentReport a = run_experiment(c);
    const ExperimentReport b = run_experiment(c);
    CHECK(a.error.empty());
    CHECK(emit_csv({a}) == emit_csv({b}));
    CHECK(a.rows.front().criterion == "eigen_rel_max");
}

TEST_CASE("module failures are reported, not thrown") {
    ExperimentConfig c;
    c.id = "E6";
    c.M = 16;
    c.L = 16.0;
    c.radii = std::vector<double>{0.1};
    const ExperimentReport r = run_experiment(c);
    CHECK_FALSE(r.error.empty());
    CHECK_FALSE(r.passed());
}
