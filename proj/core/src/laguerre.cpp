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

#include "twistlab/laguerre.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace twistlab {

double laguerre_polynomial(int k, double alpha, double x) {
    if (k < 0) throw PreconditionError("laguerre_polynomial: k must be non-negative");
    if (k > kMaxLaguerreDegree) throw PreconditionError("laguerre_polynomial: k beyond validated range (256)");
    if (!(alpha > -1.0)) throw PreconditionError("laguerre_polynomial: alpha must exceed -1");
    if (!(x >= 0.0)) throw PreconditionError("laguerre_polynomial: x must be non-negative");
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = 1.0 + alpha - x;
    for (int j = 2; j <= k; ++j) {
        const double next = ((2.0 * j - 1.0 + alpha - x) * cur - (j - 1.0 + alpha) * prev) / j;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> laguerre_function_sequence(int K, double alpha, double x) {
    if (K < 0) throw PreconditionError("laguerre_function_sequence: K must be non-negative");
    std::vector<double> out(K + 1);
    // Values are tracked as v * 2^e; the exponential is applied per entry.
    int e = 0;
    double prev = 1.0;
    double cur = 1.0 + alpha - x;
    auto emit = [&](int k, double v) { out[k] = std::ldexp(v, e) * std::exp(-0.5 * x); };
    auto emit_scaled = [&](int k, double v) {
        // Combine the exponent with the decay in log space to avoid overflow.
        if (v == 0.0) {
            out[k] = 0.0;
            return;
        }
        const double logv = std::log(std::abs(v)) + e * std::log(2.0) - 0.5 * x;
        out[k] = std::copysign(std::exp(logv), v);
    };
    const bool big = x > 600.0;
    if (big) {
        emit_scaled(0, prev);
    } else {
        emit(0, prev);
    }
    if (K == 0) return out;
    if (big) {
        emit_scaled(1, cur);
    } else {
        emit(1, cur);
    }
    for (int j = 2; j <= K; ++j) {
        double next = ((2.0 * j - 1.0 + alpha - x) * cur - (j - 1.0 + alpha) * prev) / j;
        prev = cur;
        cur = next;
        if (std::abs(cur) > 0x1p500) {
            prev = std::ldexp(prev, -500);
            cur = std::ldexp(cur, -500);
            e += 500;
        }
        if (big || e != 0) {
            emit_scaled(j, cur);
        } else {
            emit(j, cur);
        }
    }
    return out;
}

double phi_value(int k, int n, double r2) {
    return laguerre_polynomial(k, n - 1.0, 0.5 * r2) * std::exp(-0.25 * r2);
}

GridFunction phi_k(int k, const Grid& grid) {
    const int A = grid.axes();
    return sample(grid, [&](const double* x) {
        double r2 = 0.0;
        for (int a = 0; a < A; ++a) r2 += x[a] * x[a];
        return cplx(phi_value(k, grid.n, r2), 0.0);
    });
}

KernelSamples phi_kernel(int k, const Grid& grid) {
    const int A = grid.axes();
    return kernel_from_function(grid, [&](const double* u) {
        double r2 = 0.0;
        for (int a = 0; a < A; ++a) r2 += u[a] * u[a];
        return cplx(phi_value(k, grid.n, r2), 0.0);
    });
}

LaguerreBasis make_basis(const Grid& grid, int K_max) {
    if (K_max < 0 || K_max > kMaxLaguerreDegree) throw PreconditionError("make_basis: K_max out of range");
    LaguerreBasis b;
    b.grid = grid;
    b.n = grid.n;
    b.K_max = K_max;
    b.phi.resize(K_max + 1);
    b.eigenvalues.resize(K_max + 1);
    parallel_for(K_max + 1, default_workers(), [&](std::size_t k) {
        b.phi[k] = phi_k(static_cast<int>(k), grid);
        b.eigenvalues[k] = 2.0 * k + grid.n;
    });
    return b;
}

namespace {

std::string manifest_path(const std::string& dir) { return (std::filesystem::path(dir) / "manifest.txt").string(); }

std::string basis_tag(const Grid& g) {
    std::ostringstream s;
    s.precision(17);
    s << "n " << g.n << " M " << g.M << " L " << g.L;
    return s.str();
}

}  // namespace

void save_basis(const LaguerreBasis& basis, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream man(manifest_path(dir));
    if (!man) throw std::runtime_error("save_basis: cannot write manifest in " + dir);
    man << "# twistlab basis " << basis_tag(basis.grid) << " K " << basis.K_max << "\n";
    for (int k = 0; k <= basis.K_max; ++k) {
        const std::string name = "phi_" + std::to_string(k) + ".twgf";
        write_twgf((std::filesystem::path(dir) / name).string(), basis.phi[k]);
        man << k << ' ' << basis.eigenvalues[k] << ' ' << name << '\n';
    }
}

LaguerreBasis load_or_build_basis(const Grid& grid, int K_max, const std::string& dir) {
    if (dir.empty()) return make_basis(grid, K_max);
    std::ifstream man(manifest_path(dir));
    if (man) {
        std::string header;
        std::getline(man, header);
        const std::string expect = "# twistlab basis " + basis_tag(grid) + " K ";
        if (header.rfind(expect, 0) == 0 && std::stoi(header.substr(expect.size())) >= K_max) {
            LaguerreBasis b;
            b.grid = grid;
            b.n = grid.n;
            b.K_max = K_max;
            int k = 0;
            double ev = 0.0;
            std::string name;
            while (static_cast<int>(b.phi.size()) <= K_max && man >> k >> ev >> name) {
                if (k != static_cast<int>(b.phi.size())) break;
                b.phi.push_back(read_twgf((std::filesystem::path(dir) / name).string()));
                b.eigenvalues.push_back(ev);
            }
            if (static_cast<int>(b.phi.size()) == K_max + 1 && b.phi.back().grid == grid) return b;
        }
    }
    LaguerreBasis b = make_basis(grid, K_max);
    save_basis(b, dir);
    return b;
}

GridFunction spectral_project(const GridFunction& f, int k, const LaguerreBasis& basis) {
    if (k < 0 || k > basis.K_max) throw PreconditionError("spectral_project: k out of range");
    GridFunction out = twisted_conv_fast(f, phi_kernel(k, f.grid));
    out *= std::pow(2.0 * kPi, -basis.n);
    return out;
}

std::vector<GridFunction> spectral_projections(const GridFunction& f, const LaguerreBasis& basis) {
    const ConvPlan plan(f);
    const double c = std::pow(2.0 * kPi, -basis.n);
    std::vector<GridFunction> out;
    out.reserve(basis.K_max + 1);
    for (int k = 0; k <= basis.K_max; ++k) {
        out.push_back(plan.apply(phi_kernel(k, f.grid)));
        out.back() *= c;
    }
    return out;
}

ParsevalResult parseval_check(const GridFunction& f, const LaguerreBasis& basis) {
    ParsevalResult r;
    const double n2 = lp_norm(f, 2.0);
    r.lhs = n2 * n2;
    if (r.lhs == 0.0) return r;
    // (2 pi)^{-2n} |f x phi_k|^2 = |(2 pi)^{-n} f x phi_k|^2.
    for (const auto& pk : spectral_projections(f, basis)) {
        const double v = lp_norm(pk, 2.0);
        r.rhs += v * v;
    }
    return r;
}

}  // namespace twistlab
