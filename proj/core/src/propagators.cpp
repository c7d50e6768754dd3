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

#include "twistlab/propagators.hpp"

#include "twistlab/numerics.hpp"

#include <cmath>
#include <sstream>

namespace twistlab {

namespace {

// Raw bump in log2(u), supported on (1/4, 4).
double dyadic_psi(double u) {
    if (!(u > 0.25 && u < 4.0)) return 0.0;
    return bump(0.5 * std::log2(u));
}

}  // namespace

double dyadic_phi(double u) {
    const double psi = dyadic_psi(u);
    if (psi == 0.0) return 0.0;
    double total = 0.0;
    for (int k = -3; k <= 3; ++k) total += dyadic_psi(std::ldexp(u, -k));
    return psi / total;
}

double dyadic_low(double u) {
    if (u <= 0.0) return 1.0;
    double upper = 0.0;
    for (int j = 1; std::ldexp(u, -j) > 0.25; ++j) upper += dyadic_phi(std::ldexp(u, -j));
    return 1.0 - upper;
}

double dyadic_weight(int j, double u) {
    if (j < 0) throw PreconditionError("dyadic_weight: j must be non-negative");
    return j == 0 ? dyadic_low(u) : dyadic_phi(std::ldexp(u, -j));
}

MultiplierSpec dyadic_piece(const MultiplierSpec& m, int j) {
    if (j < 0) throw PreconditionError("dyadic_piece: j must be non-negative");
    MultiplierSpec out;
    out.band = j;
    out.symbol = [m, j](double lambda) { return m(lambda) * dyadic_weight(j, std::sqrt(lambda)); };
    return out;
}

MultiplierSpec dyadic_piece(const MultiplierSpec& m, int j, const LaguerreBasis& basis) {
    const double top = std::sqrt(2.0 * basis.K_max + basis.n);
    if (std::ldexp(top, -j) <= 0.25) {
        std::ostringstream msg;
        msg << "dyadic_piece: band j = " << j << " lies above K_max = " << basis.K_max << "; piece is zero";
        warn(msg.str());
        MultiplierSpec zero;
        zero.band = j;
        zero.symbol = [](double) { return cplx(0.0, 0.0); };
        return zero;
    }
    return dyadic_piece(m, j);
}

double critical_delta(int n, double p) { return (2.0 * n - 1.0) * (1.0 / p - 0.5); }

MultiplierSpec wave_symbol(double delta, double t) {
    MultiplierSpec m;
    m.symbol = [delta, t](double lambda) {
        return std::pow(lambda, -0.5 * delta) * std::polar(1.0, t * std::sqrt(lambda));
    };
    return m;
}

double heat_kernel_value(double t, int n, double r2) {
    return std::pow(4.0 * kPi * std::sinh(t), -n) * std::exp(-0.25 * r2 / std::tanh(t));
}

static void check_heat_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("heat kernel: t must be positive and finite");
    if (t < 1e-6) throw NumericalError("heat kernel: t below 1e-6 concentrates beneath grid resolution");
}

GridFunction heat_kernel(double t, const Grid& grid) {
    check_heat_time(t);
    const int A = grid.axes();
    return sample(grid, [&](const double* x) {
        double r2 = 0.0;
        for (int a = 0; a < A; ++a) r2 += x[a] * x[a];
        return cplx(heat_kernel_value(t, grid.n, r2), 0.0);
    });
}

KernelSamples heat_kernel_samples(double t, const Grid& grid) {
    check_heat_time(t);
    const int A = grid.axes();
    return kernel_from_function(grid, [&](const double* u) {
        double r2 = 0.0;
        for (int a = 0; a < A; ++a) r2 += u[a] * u[a];
        return cplx(heat_kernel_value(t, grid.n, r2), 0.0);
    });
}

static void check_schrodinger_time(double s) {
    if (!std::isfinite(s) || std::abs(std::sin(s)) <= 1e-8) {
        throw PreconditionError("schrodinger kernel: singular time (sin s = 0)");
    }
}

cplx schrodinger_kernel_value(double s, int n, double r2) {
    const cplx pre = std::pow(cplx(0.0, 1.0), n) * std::pow(4.0 * kPi * std::sin(s), -n);
    return pre * std::polar(1.0, -0.25 * r2 / std::tan(s));
}

GridFunction schrodinger_kernel(double s, const Grid& grid) {
    check_schrodinger_time(s);
    const int A = grid.axes();
    return sample(grid, [&](const double* x) {
        double r2 = 0.0;
        for (int a = 0; a < A; ++a) r2 += x[a] * x[a];
        return schrodinger_kernel_value(s, grid.n, r2);
    });
}

KernelSamples schrodinger_kernel_samples(double s, const Grid& grid) {
    check_schrodinger_time(s);
    const int A = grid.axes();
    return kernel_from_function(grid, [&](const double* u) {
        double r2 = 0.0;
        for (int a = 0; a < A; ++a) r2 += u[a] * u[a];
        return schrodinger_kernel_value(s, grid.n, r2);
    });
}

SpectralDecomposition::SpectralDecomposition(const GridFunction& f, const LaguerreBasis& basis)
    : basis_(&basis), proj_(spectral_projections(f, basis)) {}

GridFunction SpectralDecomposition::apply(const MultiplierSpec& m) const {
    std::vector<cplx> c(proj_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = m(basis_->eigenvalues[k]);
    return apply(c);
}

GridFunction SpectralDecomposition::apply(const std::vector<cplx>& coefficients) const {
    if (coefficients.size() != proj_.size()) throw PreconditionError("SpectralDecomposition: coefficient count");
    GridFunction out(proj_.front().grid);
    for (std::size_t k = 0; k < proj_.size(); ++k) {
        const cplx c = coefficients[k];
        if (c == cplx(0.0, 0.0)) continue;
        const auto& p = proj_[k].values;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * p[i];
    }
    return out;
}

static const LaguerreBasis& require_basis(const LaguerreBasis* basis, const char* what) {
    if (!basis) throw PreconditionError(std::string(what) + ": spectral route needs a basis");
    return *basis;
}

GridFunction heat_apply(const GridFunction& f, double t, Route route, const LaguerreBasis* basis) {
    check_heat_time(t);
    if (route == Route::Kernel) return twisted_conv_fast(f, heat_kernel_samples(t, f.grid));
    MultiplierSpec m;
    m.symbol = [t](double lambda) { return cplx(std::exp(-t * lambda), 0.0); };
    return multiplier_apply(f, m, require_basis(basis, "heat_apply"));
}

GridFunction schrodinger_apply(const GridFunction& f, double s, Route route, const LaguerreBasis* basis) {
    check_schrodinger_time(s);
    if (route == Route::Kernel) return twisted_conv_fast(f, schrodinger_kernel_samples(s, f.grid));
    MultiplierSpec m;
    m.symbol = [s](double lambda) { return std::polar(1.0, s * lambda); };
    return multiplier_apply(f, m, require_basis(basis, "schrodinger_apply"));
}

double phi_norm_squared(int k, int n) {
    double binom = 1.0;
    for (int i = 1; i <= n - 1; ++i) binom *= static_cast<double>(k + i) / i;
    return std::pow(2.0 * kPi, n) * binom;
}

KernelSamples multiplier_kernel_samples(const MultiplierSpec& m, const Grid& grid, int K_max) {
    std::vector<cplx> c(K_max + 1);
    for (int k = 0; k <= K_max; ++k) c[k] = m(2.0 * k + grid.n) * std::pow(2.0 * kPi, -grid.n);
    const int A = grid.axes();
    return kernel_from_function(grid, [&](const double* u) {
        double r2 = 0.0;
        for (int a = 0; a < A; ++a) r2 += u[a] * u[a];
        const auto seq = laguerre_function_sequence(K_max, grid.n - 1.0, 0.5 * r2);
        cplx acc(0.0, 0.0);
        for (int k = 0; k <= K_max; ++k) acc += c[k] * seq[k];
        return acc;
    });
}

MultiplierKernel multiplier_kernel(const MultiplierSpec& m, const LaguerreBasis& basis) {
    MultiplierKernel out;
    out.kernel = GridFunction(basis.grid);
    const double c = std::pow(2.0 * kPi, -basis.n);
    for (int k = 0; k <= basis.K_max; ++k) {
        const cplx mk = m(basis.eigenvalues[k]) * c;
        if (mk == cplx(0.0, 0.0)) continue;
        const auto& p = basis.phi[k].values;
        for (std::size_t i = 0; i < p.size(); ++i) out.kernel[i] += mk * p[i];
    }
    out.partial_norm = lp_norm(out.kernel, 2.0);
    // Heuristic tail: sum over the next 4 K_max + 64 orders.
    const double hn = std::pow(basis.grid.h, -basis.n);
    const int K_tail = 5 * basis.K_max + 64;
    for (int k = basis.K_max + 1; k <= K_tail; ++k) {
        out.tail_bound += std::abs(m(2.0 * k + basis.n)) * std::sqrt(phi_norm_squared(k, basis.n)) * hn * c;
    }
    if (out.tail_bound > 1e-6 * out.partial_norm) {
        std::ostringstream msg;
        msg << "multiplier_kernel: truncation tail bound " << out.tail_bound << " exceeds 1e-6 of kernel norm "
            << out.partial_norm;
        warn(msg.str());
    }
    return out;
}

GridFunction multiplier_apply(const GridFunction& f, const MultiplierSpec& m, const LaguerreBasis& basis) {
    if (!(f.grid == basis.grid)) throw PreconditionError("multiplier_apply: basis built for another grid");
    return SpectralDecomposition(f, basis).apply(m);
}

GridFunction wave_apply(const GridFunction& f, double delta, double t, const LaguerreBasis& basis) {
    if (!(t > 0.0)) throw PreconditionError("wave_apply: t must be positive");
    if (delta < 0.0) throw PreconditionError("wave_apply: delta must be non-negative");
    return multiplier_apply(f, wave_symbol(delta, t), basis);
}

}  // namespace twistlab
