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

#include "twistlab/grid.hpp"

#include <vector>

namespace twistlab {

// Degree-7 tensor Lagrange interpolation of grid samples at an arbitrary
// point (2n real coordinates). Throws when x lies outside the sample box.
cplx interpolate(const GridFunction& f, const double* x);

// Taylor expansion of g along the twisted translation, built on the fields
// Xt_j = d/dx_j - (i/2) y_j and Yt_j = d/dy_j + (i/2) x_j. With
// zeta = z - z_j and u = w - z_j,
//   g(zeta - u) e^{(i/2) Im(zeta . conj(u))}
//     = sum_{k <= N} (-1)^k / k! (u . Xt)^k g(zeta) + Phi_N(g, z, w),
// where the remainder is
//   (-1)^{N+1} / N! int_0^1 (1 - s)^N (u . Xt)^{N+1} g(zeta - s u)
//   e^{(i/2) s Im(zeta . conj(u))} ds.
// (u . Xt)^k is expanded over every index string i_1..i_k, and each string
// derivative is precomputed once on the grid.
class TwistedTaylor {
public:
    TwistedTaylor(const GridFunction& g, int N, const StencilOptions& opts = {}, int s_nodes = 32);

    int order() const { return N_; }
    // Phi_N(g, z, w).
    cplx remainder(const CPoint& z_j, const CPoint& w, const CPoint& z) const;
    // sum_{k <= N} (-1)^k / k! (u . Xt)^k g(zeta).
    cplx polynomial_part(const CPoint& z_j, const CPoint& w, const CPoint& z) const;
    // g(zeta - u) e^{(i/2) Im(zeta . conj(u))} by interpolation.
    cplx translated(const CPoint& z_j, const CPoint& w, const CPoint& z) const;

private:
    // sum over strings of length k of u_{i_1}..u_{i_k} Xt_{i_1}..Xt_{i_k} g at x.
    cplx string_sum(int k, const std::vector<double>& u, const double* x) const;

    GridFunction g_;
    int N_;
    // strings_[k][s]: string number s of length k in base-2n digits, first
    // digit is the outermost field.
    std::vector<std::vector<GridFunction>> strings_;
    std::vector<double> s_nodes_;
    std::vector<double> s_weights_;
};

// One-shot evaluation of Phi_N(g, z, w); rejects N + 1 > 6.
cplx taylor_twisted_remainder(const GridFunction& g, const CPoint& z_j, int N, const CPoint& w, const CPoint& z);

}  // namespace twistlab
