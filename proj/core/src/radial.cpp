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

#include "twistlab/radial.hpp"

#include "twistlab/laguerre.hpp"
#include "twistlab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace twistlab {

double spectral_window(double lambda, double lambda_max) {
    return 1.0 - smooth_step((lambda / lambda_max - 0.5) / 0.5);
}

RadialKernelTable::RadialKernelTable(const MultiplierSpec& m, int n, int K, double rho_max, double drho, bool windowed)
    : n_(n), K_(K), rho_max_(rho_max), drho_(drho) {
    if (n < 1 || K < 0) throw PreconditionError("RadialKernelTable: need n >= 1 and K >= 0");
    if (!(rho_max > 0.0) || !(drho > 0.0)) throw PreconditionError("RadialKernelTable: need positive rho_max and drho");
    const double lambda_max = 2.0 * K + n;
    std::vector<cplx> c(K + 1);
    const double norm = std::pow(2.0 * kPi, -n);
    for (int k = 0; k <= K; ++k) {
        const double lambda = 2.0 * k + n;
        c[k] = norm * m(lambda) * (windowed ? spectral_window(lambda, lambda_max) : 1.0);
    }
    const std::size_t count = static_cast<std::size_t>(std::ceil(rho_max / drho)) + 3;
    values_.resize(count);
    parallel_for(count, default_workers(), [&](std::size_t i) {
        const double rho = i * drho;
        const auto seq = laguerre_function_sequence(K, n - 1.0, 0.5 * rho * rho);
        cplx acc(0.0, 0.0);
        for (int k = 0; k <= K; ++k) acc += c[k] * seq[k];
        values_[i] = acc;
    });
}

cplx RadialKernelTable::operator()(double rho) const {
    if (rho > rho_max_) return cplx(0.0, 0.0);
    const double q = rho / drho_;
    const std::size_t last = values_.size() - 1;
    std::size_t i = static_cast<std::size_t>(q);
    if (i + 2 > last) i = last - 2;
    const double t = q - i;
    // Cubic Lagrange on i-1..i+2; the kernel is even in rho, so the node
    // at -drho mirrors the node at +drho.
    const cplx p0 = i == 0 ? values_[1] : values_[i - 1];
    const cplx p1 = values_[i];
    const cplx p2 = values_[i + 1];
    const cplx p3 = values_[i + 2];
    const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3;
}

PointSource cube_source(const std::function<cplx(const double*)>& f, const Cube& cube, int nodes_per_axis) {
    if (cube.center.size() != 1) throw PreconditionError("cube_source: only n = 1 is supported");
    const double half = 0.5 * cube.r;
    const QuadratureRule gx = gauss_legendre(nodes_per_axis, cube.center[0].real() - half, cube.center[0].real() + half);
    const QuadratureRule gy = gauss_legendre(nodes_per_axis, cube.center[0].imag() - half, cube.center[0].imag() + half);
    PointSource src;
    for (int a = 0; a < nodes_per_axis; ++a) {
        for (int b = 0; b < nodes_per_axis; ++b) {
            const double x[2] = {gx.nodes[a], gy.nodes[b]};
            const cplx v = f(x) * gx.weights[a] * gy.weights[b];
            if (v == cplx(0.0, 0.0)) continue;
            src.nodes.push_back({cplx(x[0], x[1])});
            src.values.push_back(v);
        }
    }
    return src;
}

double radial_apply_lp_norm(const RadialKernelTable& kernel, const PointSource& src, double R, double hz, double p,
                            int workers) {
    if (kernel.n() != 1) throw PreconditionError("radial_apply_lp_norm: only n = 1 is supported");
    if (!(R > 0.0) || !(hz > 0.0) || !(p > 0.0)) throw PreconditionError("radial_apply_lp_norm: invalid box or exponent");
    const int P = static_cast<int>(std::llround(2.0 * R / hz));
    std::vector<double> row(P, 0.0);
    const std::size_t Q = src.nodes.size();
    parallel_for(static_cast<std::size_t>(P), workers > 0 ? workers : default_workers(), [&](std::size_t ix) {
        const double x = -R + (ix + 0.5) * hz;
        double acc = 0.0;
        for (int iy = 0; iy < P; ++iy) {
            const double y = -R + (iy + 0.5) * hz;
            cplx v(0.0, 0.0);
            for (std::size_t q = 0; q < Q; ++q) {
                const double wx = src.nodes[q][0].real();
                const double wy = src.nodes[q][0].imag();
                const double rho = std::hypot(x - wx, y - wy);
                // Im(z conj(w)) = y wx - x wy
                v += kernel(rho) * std::polar(1.0, 0.5 * (y * wx - x * wy)) * src.values[q];
            }
            acc += std::pow(std::abs(v), p);
        }
        row[ix] = acc;
    });
    double total = 0.0;
    for (double v : row) total += v;
    return std::pow(total * hz * hz, 1.0 / p);
}

std::function<cplx(const double*)> dipole_atom(double r) {
    if (!(r > 0.0)) throw PreconditionError("dipole_atom: r must be positive");
    // sup |b'| for b = bump(., 4), located by a fine scan.
    double sup = 0.0;
    for (int i = -20000; i <= 20000; ++i) sup = std::max(sup, std::abs(bump_derivative(i / 20000.0, 4.0)));
    const double scale = 1.0 / (r * r * sup);
    return [r, scale](const double* x) {
        return cplx(scale * bump_derivative(2.0 * x[0] / r, 4.0) * bump(2.0 * x[1] / r, 4.0), 0.0);
    };
}

double wave_atom_l1_norm(double r, double delta, const WaveProbeOptions& opts) {
    if (!(r > 0.0)) throw PreconditionError("wave_atom_l1_norm: r must be positive");
    const int K = std::min(opts.k_max, static_cast<int>(std::ceil(opts.k_scale / (r * r))));
    // Resolve the highest oscillation sqrt(lambda_K) with about 25 points per period.
    const double drho = std::min(0.002, 2.0 * kPi / std::sqrt(2.0 * K + 1.0) / 25.0);
    const double reach = opts.R * std::sqrt(2.0) + 0.5 * r * std::sqrt(2.0) + 0.01;
    const RadialKernelTable table(wave_symbol(delta, opts.t), 1, K, reach, drho, true);
    const Cube cube{{cplx(0.0, 0.0)}, r};
    const PointSource src = cube_source(dipole_atom(r), cube, opts.quad_nodes);
    const double hz = std::min(opts.hz_factor * r, opts.hz_cap);
    return radial_apply_lp_norm(table, src, opts.R, hz, 1.0, opts.workers);
}

}  // namespace twistlab
