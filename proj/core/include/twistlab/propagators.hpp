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

#include "twistlab/conv.hpp"
#include "twistlab/grid.hpp"
#include "twistlab/laguerre.hpp"

#include <functional>
#include <vector>

namespace twistlab {

// Scalar symbol lambda -> m(lambda) on [n, inf). When band >= 0 the symbol
// is already localized to the dyadic band of that index.
struct MultiplierSpec {
    std::function<cplx(double)> symbol;
    int band = -1;

    cplx operator()(double lambda) const { return symbol ? symbol(lambda) : cplx(0.0, 0.0); }
};

// Dyadic partition of unity in u = sqrt(lambda). phi is supported on
// [1/4, 4] with sum_{j in Z} phi(2^{-j} u) = 1 for u > 0; the j = 0 piece
// absorbs all lower scales, so sum_{j=0}^{J} pieces = 1 on (0, 2^{J-1}].
double dyadic_phi(double u);
double dyadic_low(double u);
double dyadic_weight(int j, double u);

// m_j(lambda) = m(lambda) * dyadic_weight(j, sqrt(lambda)).
MultiplierSpec dyadic_piece(const MultiplierSpec& m, int j);
// Same, warning when the band lies above the basis truncation.
MultiplierSpec dyadic_piece(const MultiplierSpec& m, int j, const LaguerreBasis& basis);

// (2n-1)(1/p - 1/2).
double critical_delta(int n, double p);

// lambda^{-delta/2} exp(i t sqrt(lambda)).
MultiplierSpec wave_symbol(double delta, double t = 1.0);

// Heat kernel of exp(-t L): (4 pi)^{-n} sinh(t)^{-n} exp(-coth(t)|z|^2/4).
double heat_kernel_value(double t, int n, double r2);
GridFunction heat_kernel(double t, const Grid& grid);
KernelSamples heat_kernel_samples(double t, const Grid& grid);

// Kernel of exp(i s L): i^n (4 pi)^{-n} sin(s)^{-n} exp(-(i/4) cot(s)|z|^2).
cplx schrodinger_kernel_value(double s, int n, double r2);
GridFunction schrodinger_kernel(double s, const Grid& grid);
KernelSamples schrodinger_kernel_samples(double s, const Grid& grid);

enum class Route { Kernel, Spectral };

// Projections P_k f = (2 pi)^{-n} f x phi_k for k <= K_max, computed once;
// any number of symbols can then be applied.
class SpectralDecomposition {
public:
    SpectralDecomposition(const GridFunction& f, const LaguerreBasis& basis);

    const std::vector<GridFunction>& projections() const { return proj_; }
    const LaguerreBasis& basis() const { return *basis_; }

    // sum_k m(2k+n) P_k f.
    GridFunction apply(const MultiplierSpec& m) const;
    GridFunction apply(const std::vector<cplx>& coefficients) const;

private:
    const LaguerreBasis* basis_;
    std::vector<GridFunction> proj_;
};

GridFunction heat_apply(const GridFunction& f, double t, Route route, const LaguerreBasis* basis = nullptr);

GridFunction schrodinger_apply(const GridFunction& f, double s, Route route = Route::Kernel,
                               const LaguerreBasis* basis = nullptr);

struct MultiplierKernel {
    GridFunction kernel;
    double tail_bound = 0.0;
    double partial_norm = 0.0;
};

// K_m = (2 pi)^{-n} sum_{k <= K_max} m(2k+n) phi_k with a heuristic tail bound.
MultiplierKernel multiplier_kernel(const MultiplierSpec& m, const LaguerreBasis& basis);

// Truncated kernel sampled on the difference lattice.
KernelSamples multiplier_kernel_samples(const MultiplierSpec& m, const Grid& grid, int K_max);

GridFunction multiplier_apply(const GridFunction& f, const MultiplierSpec& m, const LaguerreBasis& basis);

GridFunction wave_apply(const GridFunction& f, double delta, double t, const LaguerreBasis& basis);

// ||phi_k||_2^2 = (2 pi)^n C(k+n-1, k).
double phi_norm_squared(int k, int n);

}  // namespace twistlab
