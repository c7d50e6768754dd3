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

#include "twistlab/common.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace twistlab {

// Point of C^n stored as n complex coordinates z_j = x_j + i y_j.
using CPoint = std::vector<cplx>;

// Cell-centred lattice on [-L/2, L/2]^{2n}. Real axes are ordered
// (x_1..x_n, y_1..y_n); axis 0 varies slowest in the flat index.
struct Grid {
    int n = 1;
    int M = 8;
    double L = 8.0;
    double h = 1.0;

    int axes() const { return 2 * n; }
    std::size_t size() const;
    double coord(int i) const { return -0.5 * L + (i + 0.5) * h; }
    double cell_volume() const;
    // Real coordinates of the lattice point with flat index `idx`.
    void point(std::size_t idx, double* x) const;
    CPoint cpoint(std::size_t idx) const;
    // Flat index from per-axis indices.
    std::size_t flat(std::span<const int> index) const;
    // Axis stride in the flat index.
    std::size_t stride(int axis) const;

    bool operator==(const Grid& other) const;
};

Grid make_grid(int n, int M, double L);

struct GridFunction {
    Grid grid;
    std::vector<cplx> values;

    GridFunction() = default;
    explicit GridFunction(const Grid& g);
    GridFunction(const Grid& g, std::vector<cplx> v);

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(cplx s);
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx s, GridFunction a);

// Samples fn(x) at every lattice point; x holds the 2n real coordinates.
GridFunction sample(const Grid& grid, const std::function<cplx(const double*)>& fn);

// Closed cube z0 + [-r/2, r/2]^{2n}.
struct Cube {
    CPoint center;
    double r = 1.0;

    bool contains(const double* x, double slack = 0.0) const;
};

// Midpoint-rule p-norm (for p < 1 the usual p-quasi-norm).
double lp_norm(const GridFunction& f, double p);
double max_abs(const GridFunction& f);
// ||a - b||_2 / ||b||_2.
double rel_l2(const GridFunction& a, const GridFunction& b);
double max_abs_diff(const GridFunction& a, const GridFunction& b);

// Im(z . conj(w)) for z, w in C^n.
double symplectic(const CPoint& z, const CPoint& w);
double symplectic(const double* z, const double* w, int n);

enum class FieldKind { X, Y };
enum class BoundaryMode { OneSided, ZeroExtension };

struct StencilOptions {
    int order = 8;  // 4, 6 or 8
    BoundaryMode boundary = BoundaryMode::OneSided;
};

// Partial derivative along real axis `axis` with the centred stencil of
// the requested order.
GridFunction partial(const GridFunction& f, int axis, const StencilOptions& opts = {});

// X_j(lambda) = d/dx_j + (i lambda / 2) y_j, Y_j(lambda) = d/dy_j - (i lambda / 2) x_j.
// j is 1-based; lambda = -1 gives the right-invariant fields.
GridFunction apply_vector_field(const GridFunction& f, int j, FieldKind kind, int lambda,
                                const StencilOptions& opts = {});

// -sum_j (X_j^2 + Y_j^2) f.
GridFunction apply_twisted_laplacian(const GridFunction& f, const StencilOptions& opts = {});

struct TranslateResult {
    GridFunction f;
    CPoint applied;        // the lattice vector actually used
    double rounding = 0.0; // max per-axis rounding distance
};

// tau_w f(z) = f(z - w) exp((i/2) Im(z . conj w)), w rounded to the lattice.
TranslateResult twisted_translate_ex(const GridFunction& f, const CPoint& w);
GridFunction twisted_translate(const GridFunction& f, const CPoint& w);

// twgf v1 text format.
void write_twgf(const std::string& path, const GridFunction& f);
GridFunction read_twgf(const std::string& path);

}  // namespace twistlab
