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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace twistlab::harness {

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids = {"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10"};
    return ids;
}

bool is_experiment_id(const std::string& id) {
    const auto& ids = experiment_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string experiment_title(const std::string& id) {
    static const std::map<std::string, std::string> titles = {
        {"E1", "Parseval identity"},
        {"E2", "Eigenrelation of the Laguerre functions"},
        {"E3", "Fast convolution, heat routes and semigroup law"},
        {"E4", "Translation covariance"},
        {"E5", "Oscillatory kernel decay and remainder kernel"},
        {"E6", "Atoms, projection bound and heat maximal bound"},
        {"E7", "Wave sharpness probe"},
        {"E8", "Subordination identity and route equivalence"},
        {"E9", "Maximal dominance chain"},
        {"E10", "Twisted Taylor remainder identity"},
    };
    const auto it = titles.find(id);
    return it == titles.end() ? std::string() : it->second;
}

const std::vector<std::pair<std::string, std::string>>& documented_keys() {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"experiment", "experiment id (must match the command line id when both are given)"},
        {"n", "complex dimension; only 1 is supported by the experiments"},
        {"M", "points per axis (power of two, >= 8)"},
        {"L", "physical extent per axis"},
        {"K_max", "spectral truncation"},
        {"p", "list of atom exponents in (0, 1]"},
        {"sigma", "atom scale threshold"},
        {"radii", "list of cube sides or atom radii"},
        {"j", "dyadic indices for kernel decay (E5)"},
        {"remainder_j", "dyadic indices for the remainder kernel (E5)"},
        {"route_j", "dyadic indices for route equivalence (E8)"},
        {"delta", "list of smoothing exponents (E7: critical first, then sub-critical)"},
        {"tau", "list of dyadic frequencies for the subordination checks (E8)"},
        {"t", "wave time (E7)"},
        {"trials", "number of random inputs (E9)"},
        {"points", "number of sample points (E10)"},
        {"seed", "random seed"},
        {"workers", "worker threads, 0 for all cores"},
        {"out", "output directory for CSV and JSON reports"},
        {"cache", "Laguerre basis cache directory (overrides TWISTLAB_CACHE)"},
        {"allow_loosen", "permit thresholds looser than the registry defaults"},
        {"threshold.<criterion>", "override the threshold of one criterion"},
    };
    return keys;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream s;
    s << origin << ':' << line << ": " << msg;
    throw ConfigError(s.str());
}

double to_double(const std::string& v, const std::string& origin, int line, const std::string& key) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        fail(origin, line, "value of '" + key + "' is not a number: " + v);
    }
    if (used != v.size() || !std::isfinite(x)) fail(origin, line, "value of '" + key + "' is not a finite number: " + v);
    return x;
}

long long to_integer(const std::string& v, const std::string& origin, int line, const std::string& key) {
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception&) {
        fail(origin, line, "value of '" + key + "' is not an integer: " + v);
    }
    if (used != v.size()) fail(origin, line, "value of '" + key + "' is not an integer: " + v);
    return x;
}

int to_int(const std::string& v, const std::string& origin, int line, const std::string& key) {
    const long long x = to_integer(v, origin, line, key);
    if (x < -1000000000LL || x > 1000000000LL) fail(origin, line, "value of '" + key + "' is out of range");
    return static_cast<int>(x);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream s(v);
    std::string item;
    while (std::getline(s, item, ',')) out.push_back(trim(item));
    return out;
}

std::vector<double> to_double_list(const std::string& v, const std::string& origin, int line, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) {
        if (item.empty()) fail(origin, line, "empty list element in '" + key + "'");
        // Allow simple fractions such as 2/3.
        const auto slash = item.find('/');
        if (slash != std::string::npos) {
            const double a = to_double(trim(item.substr(0, slash)), origin, line, key);
            const double b = to_double(trim(item.substr(slash + 1)), origin, line, key);
            if (b == 0.0) fail(origin, line, "division by zero in '" + key + "'");
            out.push_back(a / b);
        } else {
            out.push_back(to_double(item, origin, line, key));
        }
    }
    if (out.empty()) fail(origin, line, "empty list for '" + key + "'");
    return out;
}

std::vector<int> to_int_list(const std::string& v, const std::string& origin, int line, const std::string& key) {
    std::vector<int> out;
    for (const auto& item : split_list(v)) {
        if (item.empty()) fail(origin, line, "empty list element in '" + key + "'");
        out.push_back(to_int(item, origin, line, key));
    }
    if (out.empty()) fail(origin, line, "empty list for '" + key + "'");
    return out;
}

bool to_bool(const std::string& v, const std::string& origin, int line, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(origin, line, "value of '" + key + "' is not a boolean: " + v);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty()) fail(origin, line, "missing key");
        if (value.empty()) fail(origin, line, "missing value for '" + key + "'");
        if (!seen.insert(key).second) fail(origin, line, "duplicate key '" + key + "'");

        if (key == "experiment") {
            if (!is_experiment_id(value)) fail(origin, line, "unknown experiment id '" + value + "'");
            cfg.id = value;
        } else if (key == "n") {
            cfg.n = to_int(value, origin, line, key);
        } else if (key == "M") {
            cfg.M = to_int(value, origin, line, key);
        } else if (key == "L") {
            cfg.L = to_double(value, origin, line, key);
        } else if (key == "K_max") {
            cfg.K_max = to_int(value, origin, line, key);
        } else if (key == "p") {
            cfg.p = to_double_list(value, origin, line, key);
        } else if (key == "sigma") {
            cfg.sigma = to_double(value, origin, line, key);
        } else if (key == "radii") {
            cfg.radii = to_double_list(value, origin, line, key);
        } else if (key == "j") {
            cfg.j = to_int_list(value, origin, line, key);
        } else if (key == "remainder_j") {
            cfg.remainder_j = to_int_list(value, origin, line, key);
        } else if (key == "route_j") {
            cfg.route_j = to_int_list(value, origin, line, key);
        } else if (key == "delta") {
            cfg.delta = to_double_list(value, origin, line, key);
        } else if (key == "tau") {
            cfg.tau = to_double_list(value, origin, line, key);
        } else if (key == "t") {
            cfg.t = to_double(value, origin, line, key);
        } else if (key == "trials") {
            cfg.trials = to_int(value, origin, line, key);
        } else if (key == "points") {
            cfg.points = to_int(value, origin, line, key);
        } else if (key == "seed") {
            const long long s = to_integer(value, origin, line, key);
            if (s < 0) fail(origin, line, "seed must be non-negative");
            cfg.seed = static_cast<unsigned long long>(s);
        } else if (key == "workers") {
            cfg.workers = to_int(value, origin, line, key);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "cache") {
            cfg.cache = value;
        } else if (key == "allow_loosen") {
            cfg.allow_loosen = to_bool(value, origin, line, key);
        } else if (key.rfind("threshold.", 0) == 0 && key.size() > 10) {
            cfg.thresholds[key.substr(10)] = to_double(value, origin, line, key);
        } else {
            fail(origin, line, "unknown key '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate(const ExperimentConfig& cfg) {
    if (!cfg.id.empty() && !is_experiment_id(cfg.id)) throw ConfigError("unknown experiment id '" + cfg.id + "'");
    if (cfg.n != 1) throw ConfigError("n = " + std::to_string(cfg.n) + " is not supported; the experiments run at n = 1");
    if (cfg.M && (*cfg.M < 8 || (*cfg.M & (*cfg.M - 1)) != 0)) throw ConfigError("M must be a power of two >= 8");
    if (cfg.L && !(*cfg.L > 0.0)) throw ConfigError("L must be positive");
    if (cfg.K_max && (*cfg.K_max < 1 || *cfg.K_max > 256)) throw ConfigError("K_max must lie in [1, 256]");
    if (cfg.p) {
        for (double p : *cfg.p) {
            if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p values must lie in (0, 1]");
        }
    }
    if (cfg.sigma && !(*cfg.sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (cfg.radii) {
        for (double r : *cfg.radii) {
            if (!(r > 0.0)) throw ConfigError("radii must be positive");
        }
    }
    for (const auto* list : {&cfg.j, &cfg.remainder_j, &cfg.route_j}) {
        if (*list) {
            for (int j : **list) {
                if (j < 0 || j > 12) throw ConfigError("dyadic indices must lie in [0, 12]");
            }
        }
    }
    if (cfg.delta) {
        for (double d : *cfg.delta) {
            if (!(d >= 0.0)) throw ConfigError("delta values must be non-negative");
        }
    }
    if (cfg.tau) {
        for (double t : *cfg.tau) {
            if (!(t >= 1.0)) throw ConfigError("tau values must be >= 1");
        }
    }
    if (cfg.t && !(*cfg.t > 0.0)) throw ConfigError("t must be positive");
    if (cfg.trials && *cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.points && *cfg.points < 1) throw ConfigError("points must be >= 1");
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
}

}  // namespace twistlab::harness
