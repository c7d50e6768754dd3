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

#include "twistlab/taylor.hpp"

#include "twistlab/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace twistlab {

namespace {

constexpr int kInterpPoints = 8;

struct Stencil {
    std::vector<std::size_t> index;
    std::vector<double> weight;
};

Stencil make_stencil(const Grid& grid, const double* x) {
    const int A = grid.axes();
    std::vector<int> base(A);
    std::vector<std::array<double, kInterpPoints>> w1(A);
    for (int a = 0; a < A; ++a) {
        const double q = (x[a] - grid.coord(0)) / grid.h;
        if (!(q >= -1e-9 && q <= grid.M - 1 + 1e-9)) throw PreconditionError("interpolate: point outside the grid");
        int b = static_cast<int>(std::floor(q)) - (kInterpPoints / 2 - 1);
        b = std::clamp(b, 0, grid.M - kInterpPoints);
        base[a] = b;
        for (int i = 0; i < kInterpPoints; ++i) {
            double l = 1.0;
            for (int k = 0; k < kInterpPoints; ++k) {
                if (k != i) l *= (q - (b + k)) / static_cast<double>(i - k);
            }
            w1[a][i] = l;
        }
    }
    Stencil st;
    std::size_t count = 1;
    for (int a = 0; a < A; ++a) count *= kInterpPoints;
    st.index.reserve(count);
    st.weight.reserve(count);
    std::vector<int> digit(A, 0);
    for (std::size_t c = 0; c < count; ++c) {
        std::size_t idx = 0;
        double w = 1.0;
        for (int a = 0; a < A; ++a) {
            idx = idx * grid.M + static_cast<std::size_t>(base[a] + digit[a]);
            w *= w1[a][digit[a]];
        }
        st.index.push_back(idx);
        st.weight.push_back(w);
        for (int a = A - 1; a >= 0; --a) {
            if (++digit[a] < kInterpPoints) break;
            digit[a] = 0;
        }
    }
    return st;
}

cplx apply_stencil(const Stencil& st, const GridFunction& f) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < st.index.size(); ++i) acc += st.weight[i] * f[st.index[i]];
    return acc;
}

// Real coordinates (x_1..x_n, y_1..y_n) of a complex point.
std::vector<double> real_coords(const CPoint& z) {
    const int n = static_cast<int>(z.size());
    std::vector<double> x(2 * n);
    for (int j = 0; j < n; ++j) {
        x[j] = z[j].real();
        x[n + j] = z[j].imag();
    }
    return x;
}

}  // namespace

cplx interpolate(const GridFunction& f, const double* x) { return apply_stencil(make_stencil(f.grid, x), f); }

TwistedTaylor::TwistedTaylor(const GridFunction& g, int N, const StencilOptions& opts, int s_nodes) : g_(g), N_(N) {
    if (N < 0) throw PreconditionError("TwistedTaylor: N must be non-negative");
    if (N + 1 > 6) throw PreconditionError("TwistedTaylor: N + 1 > 6 is rejected (string count grows as (2n)^(N+1))");
    if (s_nodes < 32) throw PreconditionError("TwistedTaylor: at least 32 quadrature nodes are required");
    const int n = g.grid.n;
    const int A = 2 * n;
    strings_.resize(N + 2);
    strings_[0].push_back(g);
    for (int k = 1; k <= N + 1; ++k) {
        const std::size_t inner = strings_[k - 1].size();
        for (int d = 0; d < A; ++d) {
            const FieldKind kind = d < n ? FieldKind::X : FieldKind::Y;
            const int j = (d < n ? d : d - n) + 1;
            for (std::size_t s = 0; s < inner; ++s) {
                strings_[k].push_back(apply_vector_field(strings_[k - 1][s], j, kind, -1, opts));
            }
        }
    }
    const QuadratureRule rule = gauss_legendre(s_nodes, 0.0, 1.0);
    s_nodes_ = rule.nodes;
    s_weights_ = rule.weights;
}

cplx TwistedTaylor::string_sum(int k, const std::vector<double>& u, const double* x) const {
    const Stencil st = make_stencil(g_.grid, x);
    const int A = static_cast<int>(u.size());
    const auto& family = strings_[k];
    cplx acc(0.0, 0.0);
    for (std::size_t s = 0; s < family.size(); ++s) {
        double coeff = 1.0;
        std::size_t rest = s;
        for (int m = 0; m < k; ++m) {
            coeff *= u[rest % A];
            rest /= A;
        }
        if (coeff != 0.0) acc += coeff * apply_stencil(st, family[s]);
    }
    return acc;
}

cplx TwistedTaylor::remainder(const CPoint& z_j, const CPoint& w, const CPoint& z) const {
    const int n = g_.grid.n;
    if (static_cast<int>(z_j.size()) != n || static_cast<int>(w.size()) != n || static_cast<int>(z.size()) != n) {
        throw PreconditionError("TwistedTaylor: dimension mismatch");
    }
    const auto zj = real_coords(z_j);
    const auto wx = real_coords(w);
    const auto zx = real_coords(z);
    const int A = 2 * n;
    std::vector<double> u(A);
    std::vector<double> zeta(A);
    for (int a = 0; a < A; ++a) {
        u[a] = wx[a] - zj[a];
        zeta[a] = zx[a] - zj[a];
    }
    const double sym = symplectic(zeta.data(), u.data(), n);
    double fact = 1.0;
    for (int k = 2; k <= N_; ++k) fact *= k;
    std::vector<double> xi(A);
    cplx acc(0.0, 0.0);
    for (std::size_t q = 0; q < s_nodes_.size(); ++q) {
        const double s = s_nodes_[q];
        for (int a = 0; a < A; ++a) xi[a] = zeta[a] - s * u[a];
        const cplx val = string_sum(N_ + 1, u, xi.data());
        acc += s_weights_[q] * std::pow(1.0 - s, N_) * val * std::polar(1.0, 0.5 * s * sym);
    }
    const double sign = (N_ + 1) % 2 == 0 ? 1.0 : -1.0;
    return sign / fact * acc;
}

cplx TwistedTaylor::polynomial_part(const CPoint& z_j, const CPoint& w, const CPoint& z) const {
    const int n = g_.grid.n;
    const auto zj = real_coords(z_j);
    const auto wx = real_coords(w);
    const auto zx = real_coords(z);
    const int A = 2 * n;
    std::vector<double> u(A);
    std::vector<double> zeta(A);
    for (int a = 0; a < A; ++a) {
        u[a] = wx[a] - zj[a];
        zeta[a] = zx[a] - zj[a];
    }
    cplx acc(0.0, 0.0);
    double fact = 1.0;
    for (int k = 0; k <= N_; ++k) {
        if (k > 0) fact *= k;
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        acc += sign / fact * string_sum(k, u, zeta.data());
    }
    return acc;
}

cplx TwistedTaylor::translated(const CPoint& z_j, const CPoint& w, const CPoint& z) const {
    const int n = g_.grid.n;
    const auto zj = real_coords(z_j);
    const auto wx = real_coords(w);
    const auto zx = real_coords(z);
    const int A = 2 * n;
    std::vector<double> u(A);
    std::vector<double> zeta(A);
    std::vector<double> x(A);
    for (int a = 0; a < A; ++a) {
        u[a] = wx[a] - zj[a];
        zeta[a] = zx[a] - zj[a];
        x[a] = zeta[a] - u[a];
    }
    return interpolate(g_, x.data()) * std::polar(1.0, 0.5 * symplectic(zeta.data(), u.data(), n));
}

cplx taylor_twisted_remainder(const GridFunction& g, const CPoint& z_j, int N, const CPoint& w, const CPoint& z) {
    return TwistedTaylor(g, N).remainder(z_j, w, z);
}

}  // namespace twistlab
