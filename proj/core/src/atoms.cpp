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

#include "twistlab/numerics.hpp"
#include "twistlab/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace twistlab {

namespace {

// Cube membership with a tiny slack so that the decision is stable under
// rounding of the cell-centred coordinates.
bool in_cube(const Cube& cube, const double* x, double h) { return cube.contains(x, 1e-9 * h); }

// Exponent vectors of length m with total degree <= d, graded order.
void enumerate_exponents(int m, int d, std::vector<std::vector<int>>& out) {
    std::vector<int> e(m, 0);
    for (int total = 0; total <= d; ++total) {
        std::function<void(int, int)> rec = [&](int axis, int left) {
            if (axis == m - 1) {
                e[axis] = left;
                out.push_back(e);
                return;
            }
            for (int k = left; k >= 0; --k) {
                e[axis] = k;
                rec(axis + 1, left - k);
            }
        };
        rec(0, total);
    }
}

void check_cube(const Grid& grid, const Cube& cube) {
    if (static_cast<int>(cube.center.size()) != grid.n) throw PreconditionError("cube: dimension mismatch");
    if (!(cube.r > 0.0) || !std::isfinite(cube.r)) throw PreconditionError("cube: side must be positive");
}

}  // namespace

int moment_degree(int n, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("moment_degree: p must lie in (0, 1]");
    return static_cast<int>(std::floor(2.0 * n * (1.0 / p - 1.0) + 1e-9));
}

cplx omega(const CPoint& z0, const double* z) {
    const int n = static_cast<int>(z0.size());
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += z0[j].imag() * z[j] - z0[j].real() * z[n + j];
    return std::polar(1.0, 0.5 * s);
}

std::size_t monomial_count(int m, int d) {
    // C(m + d, d)
    double c = 1.0;
    for (int i = 1; i <= d; ++i) c = c * (m + i) / i;
    return static_cast<std::size_t>(std::llround(c));
}

ProjectionBasis::ProjectionBasis(const Grid& grid, const Cube& cube, int degree)
    : ProjectionBasis(grid, cube, degree, cube.center) {}

ProjectionBasis::ProjectionBasis(const Grid& grid, const Cube& cube, int degree, const CPoint& modulation)
    : grid_(grid), cube_(cube), degree_(degree), modulation_(modulation) {
    check_cube(grid, cube);
    if (degree < 0) throw PreconditionError("ProjectionBasis: degree must be non-negative");
    if (static_cast<int>(modulation.size()) != grid.n) throw PreconditionError("ProjectionBasis: modulation dimension mismatch");
    const int A = grid.axes();
    std::vector<double> x(A);
    std::vector<double> centre(A);
    for (int j = 0; j < grid.n; ++j) {
        centre[j] = cube.center[j].real();
        centre[grid.n + j] = cube.center[j].imag();
    }
    std::vector<std::vector<double>> local;  // scaled coordinates per support point
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, x.data());
        if (!in_cube(cube, x.data(), grid.h)) continue;
        support_.push_back(i);
        std::vector<double> u(A);
        for (int a = 0; a < A; ++a) u[a] = (x[a] - centre[a]) / (0.5 * cube.r);
        local.push_back(std::move(u));
        phase_.push_back(std::conj(omega(modulation, x.data())));
    }
    std::vector<std::vector<int>> exps;
    enumerate_exponents(A, degree, exps);
    const std::size_t P = support_.size();
    if (P < 4 * exps.size()) {
        throw NumericalError("ProjectionBasis: cube holds too few grid samples for the polynomial degree");
    }
    auto dot = [P](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < P; ++i) s += a[i] * b[i];
        return s / static_cast<double>(P);
    };
    for (const auto& e : exps) {
        std::vector<double> v(P);
        for (std::size_t i = 0; i < P; ++i) {
            double m = 1.0;
            for (int a = 0; a < A; ++a) m *= std::pow(local[i][a], e[a]);
            v[i] = m;
        }
        const double norm0 = std::sqrt(dot(v, v));
        // Modified Gram-Schmidt, two sweeps.
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (const auto& q : e_) {
                const double c = dot(v, q);
                for (std::size_t i = 0; i < P; ++i) v[i] -= c * q[i];
            }
        }
        const double norm = std::sqrt(dot(v, v));
        if (!(norm > 1e-8 * norm0)) {
            throw NumericalError("ProjectionBasis: Gram conditioning failure (cube too small for the grid)");
        }
        for (auto& value : v) value /= norm;
        e_.push_back(std::move(v));
    }
    if (gram_defect() > 1e-10) throw NumericalError("ProjectionBasis: orthonormalization lost accuracy");
}

GridFunction ProjectionBasis::modulated(int k) const {
    GridFunction out(grid_);
    for (std::size_t i = 0; i < support_.size(); ++i) out[support_[i]] = e_[k][i] * phase_[i];
    return out;
}

double ProjectionBasis::gram_defect() const {
    const std::size_t P = support_.size();
    double worst = 0.0;
    for (std::size_t a = 0; a < e_.size(); ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < P; ++i) s += e_[a][i] * e_[b][i];
            s /= static_cast<double>(P);
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

GridFunction projection_PiQ(const GridFunction& f, const ProjectionBasis& basis) {
    if (!(f.grid == basis.grid())) throw PreconditionError("projection_PiQ: grid mismatch");
    const auto& support = basis.support();
    const std::size_t P = support.size();
    const auto& phase = basis.phase();
    GridFunction out(f.grid);
    for (int k = 0; k < basis.dimension(); ++k) {
        const auto& e = basis.polynomial(k);
        cplx c(0.0, 0.0);
        for (std::size_t i = 0; i < P; ++i) c += f[support[i]] * e[i] * std::conj(phase[i]);
        c /= static_cast<double>(P);
        for (std::size_t i = 0; i < P; ++i) out[support[i]] += c * e[i] * phase[i];
    }
    return out;
}

SplitResult projection_split(const GridFunction& f, const Cube& Q, int N0) {
    const ProjectionBasis basis(f.grid, Q, N0);
    SplitResult res;
    res.b = projection_PiQ(f, basis);
    res.a = f - res.b;
    return res;
}

AtomProfile bump_profile() {
    return [](const double* u) {
        (void)u;
        return cplx(1.0, 0.0);
    };
}

AtomProfile random_profile(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    const int A = 2 * n;
    struct Term {
        cplx c;
        std::vector<double> k;
        double theta;
    };
    std::vector<Term> terms;
    for (int t = 0; t < 4; ++t) {
        Term term;
        term.c = cplx(gauss(rng), gauss(rng));
        term.k.resize(A);
        for (int a = 0; a < A; ++a) term.k[a] = 0.5 * kPi * gauss(rng);
        term.theta = phase(rng);
        terms.push_back(std::move(term));
    }
    const cplx base(1.0 + std::abs(gauss(rng)), 0.0);
    return [terms, base, A](const double* u) {
        cplx acc = base;
        for (const auto& term : terms) {
            double arg = term.theta;
            for (int a = 0; a < A; ++a) arg += term.k[a] * u[a];
            acc += 0.3 * term.c * std::cos(arg);
        }
        return acc;
    };
}

Atom make_atom(const Grid& grid, const CPoint& z0, double r, double p, double sigma, const AtomProfile& profile) {
    if (!(sigma > 0.0)) throw PreconditionError("make_atom: sigma must be positive");
    const int N0 = moment_degree(grid.n, p);
    Cube cube{z0, r};
    check_cube(grid, cube);
    if (r < 8.0 * grid.h) throw PreconditionError("make_atom: cube side below 8 grid spacings");
    for (const auto& c : z0) {
        if (std::max(std::abs(c.real()), std::abs(c.imag())) + 0.5 * r > 0.5 * grid.L + 1e-12) {
            throw PreconditionError("make_atom: cube leaves the grid");
        }
    }
    const int A = grid.axes();
    std::vector<double> centre(A);
    for (int j = 0; j < grid.n; ++j) {
        centre[j] = z0[j].real();
        centre[grid.n + j] = z0[j].imag();
    }
    // Smooth seed g = bump envelope times profile, supported inside the cube.
    GridFunction g = sample(grid, [&](const double* x) {
        std::vector<double> u(A);
        double env = 1.0;
        for (int a = 0; a < A; ++a) {
            u[a] = (x[a] - centre[a]) / (0.5 * r);
            if (std::abs(u[a]) >= 1.0) return cplx(0.0, 0.0);
            env *= bump(u[a], 1.0);
        }
        return env * profile(u.data());
    });
    if (r < sigma) g = projection_split(g, cube, N0).a;
    const double sup = max_abs(g);
    if (!(sup > 0.0)) throw NumericalError("make_atom: seed profile cancelled to zero");
    g *= cplx(std::pow(r, -2.0 * grid.n / p) / sup, 0.0);
    Atom atom;
    atom.f = std::move(g);
    atom.cube = cube;
    atom.p = p;
    atom.sigma = sigma;
    atom.N0 = N0;
    return atom;
}

ValidationReport validate_atom(const Atom& a) {
    ValidationReport rep;
    const Grid& grid = a.f.grid;
    const int n = grid.n;
    const int A = grid.axes();
    const double r = a.cube.r;
    const double bound = std::pow(r, -2.0 * n / a.p);
    std::vector<double> x(A);
    double sup = 0.0;
    for (std::size_t i = 0; i < a.f.size(); ++i) {
        const double v = std::abs(a.f[i]);
        sup = std::max(sup, v);
        grid.point(i, x.data());
        if (!in_cube(a.cube, x.data(), grid.h)) rep.support_leak = std::max(rep.support_leak, v);
    }
    rep.sup_ratio = sup / bound;
    rep.degenerate = sup == 0.0;
    rep.support_ok = rep.support_leak < 1e-14;
    rep.sup_ok = rep.sup_ratio <= 1.0 + 1e-12;
    if (r >= a.sigma) return rep;

    // Exponents (alpha, beta) of z^alpha conj(z)^beta with |alpha| + |beta| <= N0.
    std::vector<std::vector<int>> exps;
    enumerate_exponents(A, a.N0, exps);
    const double dv = grid.cell_volume();
    for (const auto& e : exps) {
        MomentCheck mc;
        mc.alpha.assign(e.begin(), e.begin() + n);
        mc.beta.assign(e.begin() + n, e.end());
        int order = 0;
        for (int v : e) order += v;
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < a.f.size(); ++i) {
            if (a.f[i] == cplx(0.0, 0.0)) continue;
            grid.point(i, x.data());
            cplx mono(1.0, 0.0);
            for (int j = 0; j < n; ++j) {
                const cplx z(x[j], x[n + j]);
                for (int k = 0; k < mc.alpha[j]; ++k) mono *= z;
                for (int k = 0; k < mc.beta[j]; ++k) mono *= std::conj(z);
            }
            acc += a.f[i] * mono * omega(a.cube.center, x.data());
        }
        mc.magnitude = std::abs(acc * dv);
        mc.tolerance = 1e-8 * std::pow(r, 2.0 * n + order - 2.0 * n / a.p);
        mc.pass = mc.magnitude < mc.tolerance;
        rep.moments_ok = rep.moments_ok && mc.pass;
        rep.moments.push_back(std::move(mc));
    }
    return rep;
}

std::string atom_sidecar_path(const std::string& twgf_path) {
    const std::string ext = ".twgf";
    if (twgf_path.size() > ext.size() && twgf_path.compare(twgf_path.size() - ext.size(), ext.size(), ext) == 0) {
        return twgf_path.substr(0, twgf_path.size() - ext.size()) + ".atom";
    }
    return twgf_path + ".atom";
}

void write_atom(const std::string& twgf_path, const Atom& a) {
    write_twgf(twgf_path, a.f);
    const std::string side = atom_sidecar_path(twgf_path);
    std::ofstream out(side);
    if (!out) throw std::runtime_error("write_atom: cannot open " + side);
    out.precision(17);
    out << "# z0 r p sigma N0\n";
    for (const auto& c : a.cube.center) out << c.real() << ' ' << c.imag() << ' ';
    out << a.cube.r << ' ' << a.p << ' ' << a.sigma << ' ' << a.N0 << '\n';
    if (!out) throw std::runtime_error("write_atom: write failed for " + side);
}

Atom read_atom(const std::string& twgf_path) {
    Atom a;
    a.f = read_twgf(twgf_path);
    const std::string side = atom_sidecar_path(twgf_path);
    std::ifstream in(side);
    if (!in) throw std::runtime_error("read_atom: cannot open " + side);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream s(line);
        a.cube.center.resize(a.f.grid.n);
        for (auto& c : a.cube.center) {
            double re = 0.0;
            double im = 0.0;
            if (!(s >> re >> im)) throw std::runtime_error("read_atom: malformed centre in " + side);
            c = cplx(re, im);
        }
        if (!(s >> a.cube.r >> a.p >> a.sigma >> a.N0)) throw std::runtime_error("read_atom: malformed sidecar " + side);
        if (a.N0 != moment_degree(a.f.grid.n, a.p)) {
            throw std::runtime_error("read_atom: N0 inconsistent with p in " + side);
        }
        return a;
    }
    throw std::runtime_error("read_atom: empty sidecar " + side);
}

// ---------------------------------------------------------------- maximal functions

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi > lo) || count < 2) throw PreconditionError("log_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> t(count);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < count; ++i) t[i] = std::exp(a + (b - a) * i / (count - 1));
    t.front() = lo;
    t.back() = hi;
    return t;
}

std::vector<CPoint> lattice_ball(const Grid& grid, double radius) {
    const int n = grid.n;
    const int A = grid.axes();
    const int R = static_cast<int>(std::floor(radius / grid.h + 1e-9));
    std::vector<CPoint> out;
    std::vector<int> m(A, -R);
    while (true) {
        double r2 = 0.0;
        for (int a = 0; a < A; ++a) r2 += (m[a] * grid.h) * (m[a] * grid.h);
        if (r2 <= radius * radius * (1.0 + 1e-12)) {
            CPoint w(n);
            for (int j = 0; j < n; ++j) w[j] = cplx(m[j] * grid.h, m[n + j] * grid.h);
            out.push_back(std::move(w));
        }
        int a = A - 1;
        while (a >= 0 && m[a] == R) {
            m[a] = -R;
            --a;
        }
        if (a < 0) break;
        ++m[a];
    }
    return out;
}

namespace {

using Fn1 = std::function<cplx(double)>;

// One separable term c * prod_a f_a(x_a).
struct Tensor {
    cplx c;
    std::vector<Fn1> factors;
};

// sup over (-1/2, 1/2) of |f^{(d)}| for d = 0..N, by eighth-order central
// differences on a fine grid (the factors vanish outside the interval).
std::vector<double> derivative_sups(const Fn1& f, int N) {
    const int P = 4000;
    const double dx = 1.0 / P;
    const int half = 4 + N / 2;
    std::vector<double> nodes;
    for (int k = -half; k <= half; ++k) nodes.push_back(k * dx);
    std::vector<std::vector<double>> w(N + 1);
    for (int d = 0; d <= N; ++d) w[d] = fd_weights(0.0, nodes, d);
    std::vector<cplx> samples(P + 1 + 2 * half);
    for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
        const double x = -0.5 + (i - half) * dx;
        samples[i] = std::abs(x) < 0.5 ? f(x) : cplx(0.0, 0.0);
    }
    std::vector<double> sup(N + 1, 0.0);
    for (int i = 0; i <= P; ++i) {
        for (int d = 0; d <= N; ++d) {
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < nodes.size(); ++k) acc += w[d][k] * samples[i + k];
            sup[d] = std::max(sup[d], std::abs(acc));
        }
    }
    return sup;
}

TestBump make_test_bump(const std::string& name, const std::vector<Tensor>& terms, int n, int N) {
    const int A = 2 * n;
    std::vector<std::vector<std::vector<double>>> sups;  // [term][axis][order]
    for (const auto& t : terms) {
        std::vector<std::vector<double>> per_axis;
        for (int a = 0; a < A; ++a) per_axis.push_back(derivative_sups(t.factors[a], N));
        sups.push_back(std::move(per_axis));
    }
    std::vector<std::vector<int>> exps;
    enumerate_exponents(A, N, exps);
    double worst = 0.0;
    for (const auto& e : exps) {
        double bound = 0.0;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            double prod = std::abs(terms[t].c);
            for (int a = 0; a < A; ++a) prod *= sups[t][a][e[a]];
            bound += prod;
        }
        worst = std::max(worst, bound);
    }
    // Small safety margin for the finite-difference estimate of the sups.
    const double scale = 1.0 / (1.01 * worst);
    TestBump tb;
    tb.name = name;
    tb.scale = scale;
    tb.fn = [terms, scale, A](const double* x) {
        for (int a = 0; a < A; ++a) {
            if (std::abs(x[a]) >= 0.5) return cplx(0.0, 0.0);
        }
        cplx acc(0.0, 0.0);
        for (const auto& t : terms) {
            cplx prod = t.c;
            for (int a = 0; a < A; ++a) prod *= t.factors[a](x[a]);
            acc += prod;
        }
        return scale * acc;
    };
    return tb;
}

}  // namespace

std::vector<TestBump> default_dictionary(int n, int N) {
    if (n < 1 || N < 0) throw PreconditionError("default_dictionary: need n >= 1 and N >= 0");
    // Base bump with c = 4 keeps the higher derivatives moderate, which
    // keeps the normalization factors of the family close to one.
    const Fn1 b1 = [](double x) { return cplx(bump(2.0 * x, 4.0), 0.0); };
    const Fn1 b4 = [](double x) { return cplx(bump(2.0 * x, 8.0), 0.0); };
    const Fn1 odd = [](double x) { return cplx(2.0 * x * bump(2.0 * x, 4.0), 0.0); };
    const Fn1 cosm = [](double x) { return cplx(bump(2.0 * x, 4.0) * std::cos(4.0 * kPi * x), 0.0); };
    const Fn1 sinm = [](double x) { return cplx(bump(2.0 * x, 4.0) * std::sin(4.0 * kPi * x), 0.0); };
    const Fn1 expm = [](double x) { return bump(2.0 * x, 4.0) * std::polar(1.0, 2.0 * kPi * x); };
    const Fn1 db = [](double x) { return cplx(2.0 * bump_derivative(2.0 * x, 4.0), 0.0); };

    // Factor lists act on x_1 (axis 0) and y_1 (axis n); other axes carry b1.
    auto tensor = [n](cplx c, const Fn1& fx, const Fn1& fy, const Fn1& rest) {
        Tensor t;
        t.c = c;
        t.factors.assign(2 * n, rest);
        t.factors[0] = fx;
        t.factors[n] = fy;
        return t;
    };
    const cplx one(1.0, 0.0);
    std::vector<TestBump> dict;
    dict.push_back(make_test_bump("tensor", {tensor(one, b1, b1, b1)}, n, N));
    dict.push_back(make_test_bump("tensor-narrow", {tensor(one, b4, b4, b4)}, n, N));
    dict.push_back(make_test_bump("tensor-mixed", {tensor(one, b1, b4, b1)}, n, N));
    dict.push_back(make_test_bump("odd-x", {tensor(one, odd, b1, b1)}, n, N));
    dict.push_back(make_test_bump("odd-y", {tensor(one, b1, odd, b1)}, n, N));
    dict.push_back(make_test_bump("odd-xy", {tensor(one, odd, odd, b1)}, n, N));
    dict.push_back(make_test_bump("cos-x", {tensor(one, cosm, b1, b1)}, n, N));
    dict.push_back(make_test_bump("sin-x", {tensor(one, sinm, b1, b1)}, n, N));
    dict.push_back(make_test_bump("sin-y", {tensor(one, b1, sinm, b1)}, n, N));
    dict.push_back(make_test_bump("exp-xy", {tensor(one, expm, expm, b1)}, n, N));
    dict.push_back(make_test_bump("dir-plus", {tensor(one, db, b1, b1), tensor(one, b1, db, b1)}, n, N));
    dict.push_back(make_test_bump("dir-minus", {tensor(one, db, b1, b1), tensor(-one, b1, db, b1)}, n, N));
    return dict;
}

MaximalProfile default_profile(const Grid& grid, double p) {
    MaximalProfile prof;
    prof.t_grid = log_grid(1e-2, 1e2, 25);
    prof.w_grid = lattice_ball(grid, 2.0);
    prof.N = 2 * moment_degree(grid.n, p);
    prof.dictionary = default_dictionary(grid.n, prof.N);
    return prof;
}

std::vector<GridFunction> heat_family(const GridFunction& f, const MaximalProfile& profile, int workers) {
    if (profile.t_grid.empty()) throw PreconditionError("heat_family: empty t_grid");
    const ConvPlan plan(f, ConvMode::Fast, workers);
    std::vector<GridFunction> out;
    out.reserve(profile.t_grid.size());
    for (double t : profile.t_grid) out.push_back(plan.apply(heat_kernel_samples(t, f.grid)));
    return out;
}

namespace {

GridFunction pointwise_max_abs(const std::vector<GridFunction>& family, const Grid& grid) {
    GridFunction out(grid);
    for (const auto& u : family) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double v = std::abs(u[i]);
            if (v > out[i].real()) out[i] = cplx(v, 0.0);
        }
    }
    return out;
}

struct Offset {
    std::vector<int> m;
    double norm;
};

std::vector<Offset> offsets_of(const Grid& grid, const std::vector<CPoint>& w_grid) {
    const int n = grid.n;
    std::vector<Offset> out;
    for (const auto& w : w_grid) {
        if (static_cast<int>(w.size()) != n) throw PreconditionError("maximal: w_grid dimension mismatch");
        Offset o;
        o.m.resize(2 * n);
        double r2 = 0.0;
        for (int j = 0; j < n; ++j) {
            o.m[j] = static_cast<int>(std::lround(w[j].real() / grid.h));
            o.m[n + j] = static_cast<int>(std::lround(w[j].imag() / grid.h));
            r2 += std::norm(w[j]);
        }
        o.norm = std::sqrt(r2);
        out.push_back(std::move(o));
    }
    return out;
}

// For each heat time tau (cone radius sqrt(tau)) and offset w:
// cone part takes |w| < sqrt(tau), tangential part weights every w.
void cone_maxima(const std::vector<GridFunction>& family, const MaximalProfile& profile, int N,
                 GridFunction* nontangential, GridFunction* tangential) {
    const Grid& grid = family.front().grid;
    const int A = grid.axes();
    const auto offsets = offsets_of(grid, profile.w_grid);
    std::vector<std::size_t> stride(A);
    for (int a = 0; a < A; ++a) stride[a] = grid.stride(a);
    const std::size_t T = family.size();
    std::vector<double> radius(T);
    for (std::size_t k = 0; k < T; ++k) radius[k] = std::sqrt(profile.t_grid[k]);
    std::vector<double> weight(offsets.size() * T);
    for (std::size_t oi = 0; oi < offsets.size(); ++oi) {
        for (std::size_t k = 0; k < T; ++k) weight[oi * T + k] = std::pow(1.0 + offsets[oi].norm / radius[k], -N);
    }
    const std::size_t total = grid.size();
    std::vector<double> cone(total, 0.0);
    std::vector<double> tang(total, 0.0);
    parallel_for(total, default_workers(), [&](std::size_t i) {
        std::vector<int> idx(A);
        std::size_t rem = i;
        for (int a = A - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % grid.M);
            rem /= grid.M;
        }
        double best_cone = 0.0;
        double best_tang = 0.0;
        for (std::size_t oi = 0; oi < offsets.size(); ++oi) {
            const Offset& o = offsets[oi];
            std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i);
            bool inside = true;
            for (int a = 0; a < A; ++a) {
                const int k = idx[a] - o.m[a];
                if (k < 0 || k >= grid.M) {
                    inside = false;
                    break;
                }
                j -= static_cast<std::ptrdiff_t>(o.m[a]) * static_cast<std::ptrdiff_t>(stride[a]);
            }
            if (!inside) continue;
            for (std::size_t k = 0; k < family.size(); ++k) {
                const double v = std::abs(family[k][static_cast<std::size_t>(j)]);
                if (o.norm < radius[k]) best_cone = std::max(best_cone, v);
                best_tang = std::max(best_tang, v * weight[oi * T + k]);
            }
        }
        cone[i] = best_cone;
        tang[i] = best_tang;
    });
    if (nontangential) {
        *nontangential = GridFunction(grid);
        for (std::size_t i = 0; i < total; ++i) (*nontangential)[i] = cone[i];
    }
    if (tangential) {
        *tangential = GridFunction(grid);
        for (std::size_t i = 0; i < total; ++i) (*tangential)[i] = tang[i];
    }
}

}  // namespace

GridFunction heat_maximal(const GridFunction& f, const MaximalProfile& profile) {
    return pointwise_max_abs(heat_family(f, profile), f.grid);
}

GridFunction grand_maximal(const GridFunction& f, const MaximalProfile& profile, double sigma) {
    if (profile.dictionary.empty()) throw PreconditionError("grand_maximal: empty dictionary");
    const Grid& grid = f.grid;
    const int A = grid.axes();
    GridFunction out(grid);
    std::vector<double> scales;
    for (double t : profile.t_grid) {
        if (t < sigma && t >= 4.0 * grid.h) scales.push_back(t);
    }
    if (scales.empty()) return out;
    const ConvPlan plan(f);
    for (const auto& phi : profile.dictionary) {
        for (double t : scales) {
            const double norm = std::pow(t, -A);
            const KernelSamples k = kernel_from_function(grid, [&](const double* u) {
                std::vector<double> v(A);
                for (int a = 0; a < A; ++a) v[a] = u[a] / t;
                return norm * phi.fn(v.data());
            });
            const GridFunction c = plan.apply(k);
            for (std::size_t i = 0; i < c.size(); ++i) {
                const double v = std::abs(c[i]);
                if (v > out[i].real()) out[i] = cplx(v, 0.0);
            }
        }
    }
    return out;
}

GridFunction nontangential_maximal(const GridFunction& f, const MaximalProfile& profile) {
    GridFunction out;
    cone_maxima(heat_family(f, profile), profile, profile.N, &out, nullptr);
    return out;
}

GridFunction tangential_maximal(const GridFunction& f, int N, const MaximalProfile& profile) {
    GridFunction out;
    cone_maxima(heat_family(f, profile), profile, N, nullptr, &out);
    return out;
}

MaximalSet maximal_functions(const GridFunction& f, const MaximalProfile& profile) {
    const auto family = heat_family(f, profile);
    MaximalSet set;
    set.heat = pointwise_max_abs(family, f.grid);
    cone_maxima(family, profile, profile.N, &set.nontangential, &set.tangential);
    return set;
}

}  // namespace twistlab
