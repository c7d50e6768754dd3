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

#include <string>
#include <vector>

namespace twistlab {

inline constexpr int kMaxLaguerreDegree = 256;

// L_k^alpha(x) by the ascending three-term recurrence (k <= 256).
double laguerre_polynomial(int k, double alpha, double x);

// L_k^alpha(x) exp(-x/2) for k = 0..K in one pass. The recurrence carries
// a running power-of-two rescaling so large x cannot overflow before the
// exponential is applied. No degree limit: callers such as the radial
// wave probe need far higher orders than a grid basis.
std::vector<double> laguerre_function_sequence(int K, double alpha, double x);

// phi_k(z) = L_k^{n-1}(|z|^2/2) exp(-|z|^2/4) at squared radius r2.
double phi_value(int k, int n, double r2);

GridFunction phi_k(int k, const Grid& grid);

// phi_k sampled on the difference lattice, for use as a convolution kernel.
KernelSamples phi_kernel(int k, const Grid& grid);

struct LaguerreBasis {
    Grid grid;
    int n = 1;
    int K_max = 32;
    std::vector<GridFunction> phi;
    std::vector<double> eigenvalues;
};

LaguerreBasis make_basis(const Grid& grid, int K_max);

// Loads the basis from `dir` when a matching cache is present, otherwise
// builds it and writes the cache. An empty dir disables caching.
LaguerreBasis load_or_build_basis(const Grid& grid, int K_max, const std::string& dir);
void save_basis(const LaguerreBasis& basis, const std::string& dir);

// (2 pi)^{-n} (f x phi_k).
GridFunction spectral_project(const GridFunction& f, int k, const LaguerreBasis& basis);

// All projections k = 0..K_max sharing one convolution plan.
std::vector<GridFunction> spectral_projections(const GridFunction& f, const LaguerreBasis& basis);

struct ParsevalResult {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = int |f|^2, rhs = (2 pi)^{-2n} sum_{k <= K_max} int |f x phi_k|^2.
ParsevalResult parseval_check(const GridFunction& f, const LaguerreBasis& basis);

}  // namespace twistlab
