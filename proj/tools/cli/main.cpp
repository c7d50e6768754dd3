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

#include "twistlab/atoms.hpp"
#include "twistlab/common.hpp"
#include "twistlab/harness/config.hpp"
#include "twistlab/harness/experiments.hpp"
#include "twistlab/harness/report.hpp"
#include "twistlab/subordination.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace twistlab;
using namespace twistlab::harness;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

void print_report(const ExperimentReport& rep) {
    std::cout << "== " << rep.id << ": " << rep.title << "\n";
    for (const auto& row : rep.rows) {
        if (row.informational) {
            std::cout << "   info " << row.criterion << " = " << format_number(row.measured) << "\n";
        } else {
            std::cout << (row.pass ? "   PASS " : "   FAIL ") << row.criterion << " = " << format_number(row.measured)
                      << " (" << row.op << " " << format_number(row.threshold) << ")\n";
        }
    }
    for (const auto& t : rep.timings) {
        std::cout << (t.pass ? "   PASS " : "   FAIL ") << t.name << " = " << format_number(t.value) << " (" << t.op
                  << " " << format_number(t.limit) << ")\n";
    }
    if (!rep.error.empty()) std::cout << "   ERROR " << rep.error << "\n";
    std::cout << "   wall time " << format_number(rep.wall_time) << " s\n";
}

int cmd_run(const std::string& id, const std::string& config_path, const std::string& out, int workers) {
    ExperimentConfig base;
    if (!config_path.empty()) base = parse_config_file(config_path);
    if (!out.empty()) base.out = out;
    if (workers >= 0) base.workers = workers;

    std::vector<std::string> ids;
    if (id == "all") {
        ids = experiment_ids();
    } else {
        if (!is_experiment_id(id)) throw ConfigError("unknown experiment id '" + id + "'");
        if (!base.id.empty() && base.id != id) {
            throw ConfigError("config names experiment " + base.id + " but the command line asks for " + id);
        }
        ids = {id};
    }
    // Validate every config before running anything.
    std::vector<ExperimentConfig> cfgs;
    for (const auto& e : ids) {
        ExperimentConfig c = base;
        c.id = e;
        validate(c);
        check_thresholds(c);
        cfgs.push_back(c);
    }
    std::vector<ExperimentReport> reports;
    for (const auto& c : cfgs) {
        reports.push_back(run_experiment(c));
        print_report(reports.back());
        if (!c.out.empty()) write_report_files(reports.back(), c.out);
    }
    if (!base.out.empty() && reports.size() > 1) {
        std::ofstream csv(fs::path(base.out) / "all.csv");
        csv << emit_csv(reports);
        std::ofstream json(fs::path(base.out) / "all.json");
        json << emit_json(reports) << "\n";
        if (!csv || !json) throw std::runtime_error("cannot write combined report in " + base.out);
    }
    return exit_code(reports) == 0 ? kExitPass : kExitFail;
}

CPoint parse_point(const std::vector<double>& v) {
    if (v.size() != 2) throw ConfigError("--z0 takes two numbers: re im");
    return {cplx(v[0], v[1])};
}

void print_validation(const ValidationReport& v) {
    std::cout << "support_leak " << format_number(v.support_leak) << (v.support_ok ? " ok" : " FAIL") << "\n";
    std::cout << "sup_ratio " << format_number(v.sup_ratio) << (v.sup_ok ? " ok" : " FAIL") << "\n";
    double worst = 0.0;
    for (const auto& m : v.moments) worst = std::max(worst, m.magnitude / m.tolerance);
    std::cout << "moments " << v.moments.size() << " worst_over_tol " << format_number(worst)
              << (v.moments_ok ? " ok" : " FAIL") << "\n";
    std::cout << (v.valid() ? "valid" : "invalid") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"twistlab: numerics for the twisted Laplacian"};
    app.require_subcommand(1);

    std::string run_id;
    std::string run_config;
    std::string run_out;
    int run_workers = -1;
    auto* run = app.add_subcommand("run", "Run an experiment (E1..E10 or all)");
    run->add_option("experiment", run_id, "Experiment id, or 'all'")->required();
    run->add_option("--config", run_config, "Config file with key = value lines");
    run->add_option("--out", run_out, "Directory for CSV and JSON reports");
    run->add_option("--workers", run_workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    auto* atoms = app.add_subcommand("atoms", "Generate or validate atoms");
    atoms->require_subcommand(1);
    int mk_M = 128;
    double mk_L = 16.0;
    std::vector<double> mk_z0 = {0.0, 0.0};
    double mk_r = 1.0;
    double mk_p = 1.0;
    double mk_sigma = 16.0;
    long long mk_seed = -1;
    std::string mk_out;
    auto* make = atoms->add_subcommand("make", "Write an atom bundle (twgf plus sidecar)");
    make->add_option("--M", mk_M, "Samples per axis")->capture_default_str();
    make->add_option("--L", mk_L, "Box side")->capture_default_str();
    make->add_option("--z0", mk_z0, "Cube centre: re im")->expected(2);
    make->add_option("--r", mk_r, "Cube side")->capture_default_str();
    make->add_option("--p", mk_p, "Exponent in (0, 1]")->capture_default_str();
    make->add_option("--sigma", mk_sigma, "Scale parameter")->capture_default_str();
    make->add_option("--seed", mk_seed, "Random profile seed (default: bump profile)");
    make->add_option("--out", mk_out, "Output .twgf path")->required();
    std::string val_in;
    auto* val = atoms->add_subcommand("validate", "Check support, size and moments of an atom bundle");
    val->add_option("file", val_in, "Atom .twgf path")->required();

    auto* kernel = app.add_subcommand("kernel", "Compute an oscillatory kernel");
    std::string kernel_name;
    int kernel_j = 6;
    std::string kernel_out;
    kernel->add_option("name", kernel_name, "Kernel name (Kj)")->required()->check(CLI::IsMember({"Kj"}));
    kernel->add_option("--j", kernel_j, "Dyadic index")->required()->check(CLI::Range(0, 12));
    kernel->add_option("--out", kernel_out, "Decay report JSON; samples go to the .csv sibling")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_id, run_config, run_out, run_workers);
        if (*make) {
            if (mk_p <= 0.0 || mk_p > 1.0) throw ConfigError("--p must lie in (0, 1]");
            const Grid grid = make_grid(1, mk_M, mk_L);
            const AtomProfile prof =
                mk_seed >= 0 ? random_profile(static_cast<std::uint64_t>(mk_seed), 1) : bump_profile();
            const Atom a = make_atom(grid, parse_point(mk_z0), mk_r, mk_p, mk_sigma, prof);
            write_atom(mk_out, a);
            const ValidationReport v = validate_atom(a);
            print_validation(v);
            return v.valid() ? kExitPass : kExitFail;
        }
        if (*val) {
            const ValidationReport v = validate_atom(read_atom(val_in));
            print_validation(v);
            return v.valid() ? kExitPass : kExitFail;
        }
        if (*kernel) {
            SubordinationOptions o;
            o.build_psi_table = false;
            const SubordinationData d = compute_a_tau(default_chi(), std::ldexp(1.0, kernel_j), o);
            const OscKernel K = kernel_Kj(kernel_j, default_radial_grid(kernel_j), d);
            const DecayReport rep = verify_kernel_decay(K);
            std::ofstream js(kernel_out);
            js << to_json(rep) << "\n";
            fs::path csv_path = kernel_out;
            csv_path.replace_extension(".csv");
            if (csv_path == fs::path(kernel_out)) csv_path += ".samples.csv";
            std::ofstream csv(csv_path);
            Sweep s{{"r", "re", "im", "abs"}, {}};
            for (std::size_t i = 0; i < K.r.size(); ++i) {
                s.rows.push_back({K.r[i], K.K[i].real(), K.K[i].imag(), std::abs(K.K[i])});
            }
            csv << emit_sweep_csv(s);
            if (!js || !csv) throw std::runtime_error("cannot write " + kernel_out + " or " + csv_path.string());
            std::cout << to_json(rep) << "\n";
            return kExitPass;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitPass;
}
