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

#include "twistlab/laguerre.hpp"
#include "twistlab/propagators.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace twistlab;

TEST_CASE("Laguerre polynomials match closed forms") {
    for (double x : {0.0, 0.3, 1.7, 5.0, 12.5}) {
        CHECK(laguerre_polynomial(0, 0.0, x) == doctest::Approx(1.0));
        CHECK(laguerre_polynomial(1, 0.0, x) == doctest::Approx(1.0 - x));
        CHECK(laguerre_polynomial(2, 0.0, x) == doctest::Approx(1.0 - 2.0 * x + 0.5 * x * x));
        CHECK(laguerre_polynomial(3, 0.0, x) ==
              doctest::Approx((-x * x * x + 9.0 * x * x - 18.0 * x + 6.0) / 6.0));
        CHECK(laguerre_polynomial(2, 1.0, x) == doctest::Approx(0.5 * x * x - 3.0 * x + 3.0));
    }
    // L_k^alpha(0) = C(k + alpha, k).
    CHECK(laguerre_polynomial(10, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK(laguerre_polynomial(10, 1.0, 0.0) == doctest::Approx(11.0));
    CHECK(laguerre_polynomial(5, 2.0, 0.0) == doctest::Approx(21.0));
    CHECK_THROWS_AS(laguerre_polynomial(257, 0.0, 1.0), PreconditionError);
}

TEST_CASE("scaled Laguerre sequence agrees with the polynomial and never overflows") {
    const std::vector<double> seq = laguerre_function_sequence(40, 0.0, 7.0);
    for (int k = 0; k <= 40; k += 5) {
        CHECK(seq[k] == doctest::Approx(laguerre_polynomial(k, 0.0, 7.0) * std::exp(-3.5)).epsilon(1e-9));
    }
    const std::vector<double> big = laguerre_function_sequence(5000, 0.0, 4000.0);
    for (double v : big) REQUIRE(std::isfinite(v));
    // |L_k(x) e^{-x/2}| <= 1 for x >= 0.
    for (double v : big) CHECK(std::abs(v) <= 1.0 + 1e-9);
}

TEST_CASE("phi_k normalization") {
    CHECK(phi_value(0, 1, 0.0) == doctest::Approx(1.0));
    CHECK(phi_value(2, 1, 4.0) == doctest::Approx((1.0 - 4.0 + 2.0) * std::exp(-1.0)));
    // phi_5 is not negligible at |z| = 8, so the box is widened.
    const Grid g = make_grid(1, 256, 32.0);
    for (int k : {0, 1, 5}) {
        const double nrm = lp_norm(phi_k(k, g), 2.0);
        CHECK(nrm * nrm == doctest::Approx(phi_norm_squared(k, 1)).epsilon(1e-8));
    }
    CHECK(phi_norm_squared(3, 2) == doctest::Approx(std::pow(2.0 * kPi, 2) * 4.0));
}

TEST_CASE("spectral projections pick out single Laguerre components") {
    // Box wide enough that phi_k, k <= 4, is below 1e-9 at the edge.
    const Grid g = make_grid(1, 256, 24.0);
    const LaguerreBasis b = make_basis(g, 6);
    CHECK(b.eigenvalues[3] == doctest::Approx(7.0));
    const GridFunction f = b.phi[1] + cplx(0.0, 0.5) * b.phi[3];
    const auto proj = spectral_projections(f, b);
    REQUIRE(proj.size() == 7);
    CHECK(rel_l2(proj[1], b.phi[1]) < 1e-6);
    CHECK(rel_l2(proj[3], cplx(0.0, 0.5) * b.phi[3]) < 1e-6);
    for (int k : {0, 2, 4, 5, 6}) CHECK(lp_norm(proj[k], 2.0) < 1e-6 * lp_norm(f, 2.0));
    CHECK(rel_l2(spectral_project(f, 3, b), proj[3]) < 1e-14);
}

TEST_CASE("Parseval identity on a finite combination") {
    const Grid g = make_grid(1, 128, 16.0);
    const LaguerreBasis b = make_basis(g, 8);
    const GridFunction f = b.phi[0] + 0.5 * b.phi[3];
    const ParsevalResult r = parseval_check(f, b);
    CHECK(r.rhs / r.lhs == doctest::Approx(1.0).epsilon(1e-6));
    // ||phi_0||^2 + ||phi_3||^2 / 4 = 2 pi (1 + 1/4).
    CHECK(r.lhs == doctest::Approx(2.0 * kPi * 1.25).epsilon(1e-8));
}

TEST_CASE("basis cache round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "twistlab_test_cache";
    std::filesystem::remove_all(dir);
    const Grid g = make_grid(1, 32, 8.0);
    const LaguerreBasis built = load_or_build_basis(g, 4, dir.string());
    CHECK(std::filesystem::exists(dir));
    const LaguerreBasis loaded = load_or_build_basis(g, 4, dir.string());
    REQUIRE(loaded.phi.size() == built.phi.size());
    for (std::size_t k = 0; k < built.phi.size(); ++k) CHECK(loaded.phi[k].values == built.phi[k].values);
    // A different grid must not reuse the cached basis.
    const Grid g2 = make_grid(1, 32, 10.0);
    const LaguerreBasis other = load_or_build_basis(g2, 4, dir.string());
    CHECK(other.grid == g2);
    std::filesystem::remove_all(dir);
}
