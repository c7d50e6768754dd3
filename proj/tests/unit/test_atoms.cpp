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

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace twistlab;

TEST_CASE("moment degree") {
    CHECK(moment_degree(1, 1.0) == 0);
    CHECK(moment_degree(1, 2.0 / 3.0) == 1);
    CHECK(moment_degree(1, 0.5) == 2);
    CHECK(moment_degree(2, 0.5) == 4);
    CHECK(moment_degree(1, 0.4) == 3);
}

TEST_CASE("monomial count") {
    CHECK(monomial_count(2, 0) == 1);
    CHECK(monomial_count(2, 2) == 6);
    CHECK(monomial_count(4, 2) == 15);
}

TEST_CASE("omega is a unimodular phase with omega(z0, z0) = 1") {
    const CPoint z0 = {cplx(0.5, -1.0)};
    const double at[2] = {0.5, -1.0};
    CHECK(std::abs(omega(z0, at) - cplx(1.0, 0.0)) < 1e-15);
    const double z[2] = {2.0, 3.0};
    CHECK(std::abs(omega(z0, z)) == doctest::Approx(1.0));
    // e^{(i/2) Im(z0 conj z)} with Im(z0 conj z) = y0 x - x0 y.
    CHECK(std::arg(omega(z0, z)) == doctest::Approx(0.5 * (-1.0 * 2.0 - 0.5 * 3.0)));
}

TEST_CASE("projection basis is orthonormal and the projection idempotent") {
    const Grid g = make_grid(1, 64, 8.0);
    const Cube Q{{cplx(0.5, -0.25)}, 2.0};
    const ProjectionBasis b(g, Q, 2, Q.center);
    CHECK(b.dimension() == 6);
    CHECK(b.gram_defect() < 1e-10);
    const GridFunction f = sample(g, [](const double* x) { return cplx(std::sin(x[0]) + x[1] * x[1], std::cos(3 * x[1])); });
    const GridFunction p1 = projection_PiQ(f, b);
    const GridFunction p2 = projection_PiQ(p1, b);
    CHECK(max_abs_diff(p1, p2) < 1e-12 * max_abs(p1));
    for (int k = 0; k < b.dimension(); ++k) {
        CHECK(max_abs_diff(projection_PiQ(b.modulated(k), b), b.modulated(k)) < 1e-12);
    }
    // Nothing leaves the cube.
    double x[2];
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        if (!Q.contains(x)) CHECK(p1[i] == cplx(0.0, 0.0));
    }
}

TEST_CASE("projection split removes the moments") {
    const Grid g = make_grid(1, 64, 8.0);
    const Cube Q{{cplx(0.0, 0.0)}, 2.0};
    const GridFunction f = sample(g, [&](const double* x) {
        return Q.contains(x) ? cplx(1.0 + x[0] + x[0] * x[1], 0.5 * x[1] * x[1]) : cplx(0.0, 0.0);
    });
    const SplitResult s = projection_split(f, Q, 2);
    CHECK(max_abs_diff(s.a + s.b, f) < 1e-14);
    // f is a polynomial of degree two times the unit phase at the origin, so it is reproduced.
    CHECK(max_abs(s.a) < 1e-10);
}

TEST_CASE("generated atoms pass validation") {
    const Grid g = make_grid(1, 128, 16.0);
    for (double p : {1.0, 2.0 / 3.0, 0.5}) {
        for (double r : {8.0, 2.0, 1.0}) {
            const Atom a = make_atom(g, {cplx(0.0, 0.0)}, r, p, 16.0);
            CHECK(a.N0 == moment_degree(1, p));
            const ValidationReport v = validate_atom(a);
            CHECK(v.valid());
            CHECK(v.sup_ratio == doctest::Approx(1.0));
            CHECK(v.moments.size() == monomial_count(2, a.N0));
        }
    }
    const Atom off = make_atom(g, {cplx(1.5, -2.0)}, 2.0, 0.5, 16.0, random_profile(11, 1));
    CHECK(validate_atom(off).valid());
    // At r >= sigma no cancellation is required.
    const Atom big = make_atom(g, {cplx(0.0, 0.0)}, 4.0, 0.5, 2.0);
    CHECK(validate_atom(big).support_ok);
}

TEST_CASE("validation detects broken atoms") {
    const Grid g = make_grid(1, 64, 8.0);
    Atom a = make_atom(g, {cplx(0.0, 0.0)}, 2.0, 0.5, 8.0);
    REQUIRE(validate_atom(a).valid());
    Atom leak = a;
    leak.f[0] = cplx(1e-3, 0.0);
    CHECK_FALSE(validate_atom(leak).support_ok);
    Atom big = a;
    big.f *= cplx(1.01, 0.0);
    CHECK_FALSE(validate_atom(big).sup_ok);
    Atom shifted = a;
    double x[2];
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        if (a.cube.contains(x)) shifted.f[i] += cplx(0.01 * std::pow(2.0, -4.0), 0.0);
    }
    CHECK_FALSE(validate_atom(shifted).moments_ok);
}

TEST_CASE("atom construction preconditions") {
    const Grid g = make_grid(1, 32, 8.0);
    CHECK_THROWS_AS(make_atom(g, {cplx(0.0, 0.0)}, 0.5, 1.0, 8.0), PreconditionError);
    CHECK_THROWS_AS(make_atom(g, {cplx(3.5, 0.0)}, 2.0, 1.0, 8.0), PreconditionError);
}

TEST_CASE("atom bundles round trip") {
    const Grid g = make_grid(1, 64, 8.0);
    const Atom a = make_atom(g, {cplx(0.25, -0.5)}, 2.0, 2.0 / 3.0, 4.0, random_profile(5, 1));
    const auto path = std::filesystem::temp_directory_path() / "twistlab_test_atom.twgf";
    write_atom(path.string(), a);
    CHECK(atom_sidecar_path(path.string()).ends_with(".atom"));
    const Atom b = read_atom(path.string());
    CHECK(b.f.values == a.f.values);
    CHECK(b.cube.center == a.cube.center);
    CHECK(b.cube.r == a.cube.r);
    CHECK(b.p == a.p);
    CHECK(b.sigma == a.sigma);
    CHECK(b.N0 == a.N0);
    std::filesystem::remove(path);
    std::filesystem::remove(atom_sidecar_path(path.string()));
}

TEST_CASE("random profiles are reproducible") {
    const AtomProfile a = random_profile(42, 1);
    const AtomProfile b = random_profile(42, 1);
    const AtomProfile c = random_profile(43, 1);
    const double u[2] = {0.2, -0.3};
    CHECK(a(u) == b(u));
    CHECK(a(u) != c(u));
}

TEST_CASE("maximal profile ingredients") {
    const std::vector<double> t = log_grid(1e-2, 1e2, 25);
    CHECK(t.size() == 25);
    CHECK(t.front() == doctest::Approx(1e-2));
    CHECK(t.back() == doctest::Approx(1e2));
    CHECK(t[12] == doctest::Approx(1.0));
    const Grid g = make_grid(1, 16, 4.0);
    // Offsets of spacing 1/4 inside the disc of radius 1/2: 13 points.
    CHECK(lattice_ball(g, 0.5).size() == 13);
    const auto dict = default_dictionary(1, 4);
    CHECK(dict.size() == 12);
    for (const auto& d : dict) {
        for (double x = -1.0; x <= 1.0; x += 0.05) {
            for (double y = -1.0; y <= 1.0; y += 0.05) {
                const double p[2] = {x, y};
                CHECK(std::abs(d.fn(p)) <= 1.0);
            }
        }
        const double out[2] = {1.2, 0.0};
        CHECK(d.fn(out) == cplx(0.0, 0.0));
    }
    const MaximalProfile prof = default_profile(make_grid(1, 64, 8.0), 0.5);
    CHECK(prof.N == 4);
}

TEST_CASE("heat maximal function dominates the heat evolution") {
    const Grid g = make_grid(1, 64, 16.0);
    const Atom a = make_atom(g, {cplx(0.0, 0.0)}, 2.0, 1.0, 16.0);
    const MaximalProfile prof = default_profile(g, 1.0);
    const GridFunction H = heat_maximal(a.f, prof);
    const GridFunction e = heat_apply(a.f, prof.t_grid[5], Route::Kernel);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(H[i].real() >= std::abs(e[i]) - 1e-12);
    const GridFunction G = grand_maximal(a.f, prof, 16.0);
    for (const auto& v : G.values) CHECK(v.real() >= 0.0);
}
