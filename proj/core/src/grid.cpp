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

#include "twistlab/grid.hpp"

#include "twistlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace twistlab {

std::size_t Grid::size() const {
    std::size_t total = 1;
    for (int a = 0; a < axes(); ++a) total *= static_cast<std::size_t>(M);
    return total;
}

double Grid::cell_volume() const { return std::pow(h, axes()); }

std::size_t Grid::stride(int axis) const {
    std::size_t s = 1;
    for (int a = axes() - 1; a > axis; --a) s *= static_cast<std::size_t>(M);
    return s;
}

void Grid::point(std::size_t idx, double* x) const {
    for (int a = axes() - 1; a >= 0; --a) {
        x[a] = coord(static_cast<int>(idx % M));
        idx /= M;
    }
}

CPoint Grid::cpoint(std::size_t idx) const {
    std::vector<double> x(axes());
    point(idx, x.data());
    CPoint z(n);
    for (int j = 0; j < n; ++j) z[j] = cplx(x[j], x[n + j]);
    return z;
}

std::size_t Grid::flat(std::span<const int> index) const {
    std::size_t idx = 0;
    for (int a = 0; a < axes(); ++a) idx = idx * M + index[a];
    return idx;
}

bool Grid::operator==(const Grid& other) const {
    return n == other.n && M == other.M && L == other.L;
}

Grid make_grid(int n, int M, double L) {
    if (n < 1) throw PreconditionError("make_grid: n must be at least 1");
    if (M < 8) throw PreconditionError("make_grid: M must be at least 8");
    if ((M & (M - 1)) != 0) throw PreconditionError("make_grid: M must be a power of two");
    if (!std::isfinite(L) || L <= 0.0) throw PreconditionError("make_grid: L must be finite and positive");
    Grid g;
    g.n = n;
    g.M = M;
    g.L = L;
    g.h = L / M;
    return g;
}

GridFunction::GridFunction(const Grid& g) : grid(g), values(g.size(), cplx(0.0, 0.0)) {}

GridFunction::GridFunction(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw PreconditionError("GridFunction: value count does not match grid");
}

static void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
    if (!(a.grid == b.grid)) throw PreconditionError(std::string(what) + ": mismatched grids");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_grid(*this, other, "operator+=");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_grid(*this, other, "operator-=");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= other.values[i];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
    for (auto& v : values) v *= s;
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

GridFunction sample(const Grid& grid, const std::function<cplx(const double*)>& fn) {
    GridFunction f(grid);
    std::vector<double> x(grid.axes());
    for (std::size_t i = 0; i < f.size(); ++i) {
        grid.point(i, x.data());
        f[i] = fn(x.data());
    }
    return f;
}

bool Cube::contains(const double* x, double slack) const {
    const int n = static_cast<int>(center.size());
    const double half = 0.5 * r + slack;
    for (int j = 0; j < n; ++j) {
        if (std::abs(x[j] - center[j].real()) > half) return false;
        if (std::abs(x[n + j] - center[j].imag()) > half) return false;
    }
    return true;
}

double lp_norm(const GridFunction& f, double p) {
    if (!(p > 0.0)) throw PreconditionError("lp_norm: p must be positive");
    double sum = 0.0;
    for (const auto& v : f.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalError("lp_norm: non-finite sample");
        }
        sum += p == 2.0 ? std::norm(v) : std::pow(std::abs(v), p);
    }
    return std::pow(sum * f.grid.cell_volume(), 1.0 / p);
}

double max_abs(const GridFunction& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double rel_l2(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "rel_l2");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
    return std::sqrt(num / den);
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double symplectic(const CPoint& z, const CPoint& w) {
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) s += std::imag(z[j] * std::conj(w[j]));
    return s;
}

double symplectic(const double* z, const double* w, int n) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += z[n + j] * w[j] - z[j] * w[n + j];
    return s;
}

namespace {

struct StencilTable {
    int half = 4;
    std::vector<double> central;                    // 2*half+1 weights
    std::vector<std::vector<double>> left, right;   // closures for the first/last `half` points
};

StencilTable make_stencil(int M, const StencilOptions& opts) {
    if (opts.order != 4 && opts.order != 6 && opts.order != 8) {
        throw PreconditionError("stencil order must be 4, 6 or 8");
    }
    StencilTable t;
    t.half = opts.order / 2;
    if (M < opts.order + 1) throw PreconditionError("grid too small for stencil order");
    std::vector<double> nodes(opts.order + 1);
    for (int k = 0; k <= opts.order; ++k) nodes[k] = k - t.half;
    t.central = fd_weights(0.0, nodes, 1);
    if (opts.boundary == BoundaryMode::OneSided) {
        for (int k = 0; k <= opts.order; ++k) nodes[k] = k;
        for (int i = 0; i < t.half; ++i) {
            t.left.push_back(fd_weights(i, nodes, 1));
            t.right.push_back(fd_weights(opts.order - i, nodes, 1));
        }
    }
    return t;
}

}  // namespace

GridFunction partial(const GridFunction& f, int axis, const StencilOptions& opts) {
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.axes()) throw PreconditionError("partial: axis out of range");
    const StencilTable st = make_stencil(g.M, opts);
    const int M = g.M;
    const int H = st.half;
    const std::size_t stride = g.stride(axis);
    const double inv_h = 1.0 / g.h;
    GridFunction out(g);
    const std::size_t lines = g.size() / M;
    for (std::size_t line = 0; line < lines; ++line) {
        const std::size_t outer = line / stride;
        const std::size_t inner = line % stride;
        const std::size_t base = outer * stride * M + inner;
        auto at = [&](int i) -> const cplx& { return f.values[base + i * stride]; };
        for (int i = 0; i < M; ++i) {
            cplx acc(0.0, 0.0);
            if (i >= H && i < M - H) {
                for (int k = -H; k <= H; ++k) acc += st.central[k + H] * at(i + k);
            } else if (opts.boundary == BoundaryMode::ZeroExtension) {
                for (int k = -H; k <= H; ++k) {
                    const int ii = i + k;
                    if (ii >= 0 && ii < M) acc += st.central[k + H] * at(ii);
                }
            } else if (i < H) {
                const auto& w = st.left[i];
                for (int k = 0; k <= 2 * H; ++k) acc += w[k] * at(k);
            } else {
                const auto& w = st.right[M - 1 - i];
                for (int k = 0; k <= 2 * H; ++k) acc += w[k] * at(M - 1 - 2 * H + k);
            }
            out.values[base + i * stride] = acc * inv_h;
        }
    }
    return out;
}

GridFunction apply_vector_field(const GridFunction& f, int j, FieldKind kind, int lambda,
                                const StencilOptions& opts) {
    const Grid& g = f.grid;
    if (j < 1 || j > g.n) throw PreconditionError("apply_vector_field: j out of range");
    if (lambda != 1 && lambda != -1) throw PreconditionError("apply_vector_field: lambda must be +1 or -1");
    const int dx_axis = j - 1;
    const int dy_axis = g.n + j - 1;
    GridFunction out = partial(f, kind == FieldKind::X ? dx_axis : dy_axis, opts);
    std::vector<double> x(g.axes());
    const cplx half_i(0.0, 0.5 * lambda);
    for (std::size_t i = 0; i < out.size(); ++i) {
        g.point(i, x.data());
        if (kind == FieldKind::X) {
            out[i] += half_i * x[dy_axis] * f[i];
        } else {
            out[i] -= half_i * x[dx_axis] * f[i];
        }
    }
    return out;
}

GridFunction apply_twisted_laplacian(const GridFunction& f, const StencilOptions& opts) {
    GridFunction out(f.grid);
    for (int j = 1; j <= f.grid.n; ++j) {
        for (FieldKind kind : {FieldKind::X, FieldKind::Y}) {
            const GridFunction once = apply_vector_field(f, j, kind, 1, opts);
            out -= apply_vector_field(once, j, kind, 1, opts);
        }
    }
    return out;
}

TranslateResult twisted_translate_ex(const GridFunction& f, const CPoint& w) {
    const Grid& g = f.grid;
    if (static_cast<int>(w.size()) != g.n) throw PreconditionError("twisted_translate: dimension mismatch");
    const int A = g.axes();
    std::vector<int> shift(A);
    std::vector<double> wv(A);
    TranslateResult res;
    res.applied.assign(g.n, cplx(0.0, 0.0));
    double wnorm2 = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double comps[2] = {w[j].real(), w[j].imag()};
        for (int part = 0; part < 2; ++part) {
            const int axis = part == 0 ? j : g.n + j;
            const double c = comps[part];
            if (!std::isfinite(c)) throw PreconditionError("twisted_translate: non-finite shift");
            shift[axis] = static_cast<int>(std::lround(c / g.h));
            wv[axis] = shift[axis] * g.h;
            res.rounding = std::max(res.rounding, std::abs(c - wv[axis]));
            wnorm2 += c * c;
        }
        res.applied[j] = cplx(wv[j], wv[g.n + j]);
    }
    if (res.rounding > 1e-9 * g.h) {
        std::ostringstream msg;
        msg << "twisted_translate: shift rounded to lattice (distance " << res.rounding << ")";
        warn(msg.str());
    }
    if (std::sqrt(wnorm2) > 0.25 * g.L) {
        warn("twisted_translate: |w| exceeds L/4; support may leave the box");
    }
    res.f = GridFunction(g);
    std::vector<int> idx(A);
    std::vector<double> x(A);
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t rem = i;
        bool inside = true;
        for (int a = A - 1; a >= 0; --a) {
            const int ia = static_cast<int>(rem % g.M);
            rem /= g.M;
            idx[a] = ia - shift[a];
            if (idx[a] < 0 || idx[a] >= g.M) inside = false;
        }
        if (!inside) continue;
        g.point(i, x.data());
        const double phase = 0.5 * symplectic(x.data(), wv.data(), g.n);
        res.f[i] = f[g.flat(idx)] * std::polar(1.0, phase);
    }
    return res;
}

GridFunction twisted_translate(const GridFunction& f, const CPoint& w) {
    return twisted_translate_ex(f, w).f;
}

void write_twgf(const std::string& path, const GridFunction& f) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("write_twgf: cannot open " + path);
    std::fprintf(fp, "twgf 1 %d %d %.17g\n", f.grid.n, f.grid.M, f.grid.L);
    for (const auto& v : f.values) std::fprintf(fp, "%.17g %.17g\n", v.real(), v.imag());
    const bool failed = std::ferror(fp) != 0;
    std::fclose(fp);
    if (failed) throw std::runtime_error("write_twgf: write failed for " + path);
}

GridFunction read_twgf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_twgf: cannot open " + path);
    std::string magic;
    int version = 0;
    int n = 0;
    int M = 0;
    double L = 0.0;
    if (!(in >> magic >> version >> n >> M >> L) || magic != "twgf" || version != 1) {
        throw std::runtime_error("read_twgf: bad header in " + path);
    }
    const Grid g = make_grid(n, M, L);
    GridFunction f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double re = 0.0;
        double im = 0.0;
        if (!(in >> re >> im)) throw std::runtime_error("read_twgf: truncated data in " + path);
        f[i] = cplx(re, im);
    }
    return f;
}

}  // namespace twistlab
