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

#include "twistlab/propagators.hpp"
#include "twistlab/subordination.hpp"

#include <doctest.h>

#include <cmath>

using namespace twistlab;

namespace {

MultiplierSpec heat_symbol(double t) {
    return {[t](double lambda) { return cplx(std::exp(-t * lambda), 0.0); }, -1};
}

}  // namespace

TEST_CASE("heat kernel equals its Laguerre expansion") {
    // Mehler's formula: (2 pi)^{-1} sum_k e^{-t(2k+1)} phi_k = heat kernel.
    for (double t : {0.25, 1.0}) {
        for (double r : {0.0, 0.7, 2.5}) {
            const cplx series = multiplier_kernel_radial(heat_symbol(t), 1, 400, r);
            CHECK(series.real() == doctest::Approx(heat_kernel_value(t, 1, r * r)).epsilon(1e-10));
            CHECK(std::abs(series.imag()) < 1e-14);
        }
    }
}

TEST_CASE("heat propagator multiplies phi_0 by e^{-t}") {
    const Grid g = make_grid(1, 128, 16.0);
    const GridFunction phi0 = phi_k(0, g);
    for (double t : {0.1, 0.5, 2.0}) {
        const GridFunction out = heat_apply(phi0, t, Route::Kernel);
        CHECK(rel_l2(out, cplx(std::exp(-t), 0.0) * phi0) < 1e-8);
    }
}

TEST_CASE("heat routes agree and form a semigroup") {
    const Grid g = make_grid(1, 64, 16.0);
    const LaguerreBasis b = make_basis(g, 12);
    const GridFunction f = b.phi[1] + cplx(0.3, 0.2) * b.phi[4];
    CHECK(rel_l2(heat_apply(f, 0.5, Route::Kernel), heat_apply(f, 0.5, Route::Spectral, &b)) < 1e-8);
    const GridFunction twice = heat_apply(heat_apply(f, 0.3, Route::Kernel), 0.4, Route::Kernel);
    CHECK(rel_l2(twice, heat_apply(f, 0.7, Route::Kernel)) < 1e-6);
    CHECK_THROWS_AS(heat_apply(f, 0.5, Route::Spectral, nullptr), PreconditionError);
}

TEST_CASE("Schrodinger propagator acts by a phase on Laguerre functions") {
    const Grid g = make_grid(1, 128, 16.0);
    const double s = 0.5;
    for (int k : {0, 2}) {
        const GridFunction pk = phi_k(k, g);
        const GridFunction out = schrodinger_apply(pk, s, Route::Kernel);
        CHECK(rel_l2(out, std::polar(1.0, s * (2.0 * k + 1.0)) * pk) < 1e-4);
    }
}

TEST_CASE("dyadic pieces form a partition of unity") {
    for (double u : {1e-3, 0.2, 0.5, 1.0, 3.7, 10.0, 63.9}) {
        double s = 0.0;
        for (int j = 0; j <= 7; ++j) s += dyadic_weight(j, u);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(dyadic_phi(0.2) == 0.0);
    CHECK(dyadic_phi(4.5) == 0.0);
    for (double u : {0.3, 0.9, 1.6, 3.1}) {
        double s = 0.0;
        for (int j = -6; j <= 6; ++j) s += dyadic_phi(std::ldexp(u, -j));
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("wave symbol and critical exponent") {
    CHECK(critical_delta(1, 1.0) == doctest::Approx(0.5));
    CHECK(critical_delta(2, 0.5) == doctest::Approx(4.5));
    const MultiplierSpec m = wave_symbol(0.5, 1.0);
    const cplx v = m(9.0);
    CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(std::arg(v) == doctest::Approx(std::remainder(3.0, 2.0 * kPi)));
    const MultiplierSpec mj = dyadic_piece(m, 3);
    CHECK(mj.band == 3);
    CHECK(std::abs(mj(1.0)) == 0.0);
}

TEST_CASE("spectral multiplier application is linear in the symbol") {
    // Box wide enough that phi_k, k <= 4, is below 1e-9 at the edge.
    const Grid g = make_grid(1, 256, 24.0);
    const LaguerreBasis b = make_basis(g, 10);
    const GridFunction f = b.phi[0] + b.phi[2] + b.phi[4];
    const SpectralDecomposition sd(f, b);
    const MultiplierSpec one{[](double) { return cplx(1.0, 0.0); }, -1};
    CHECK(rel_l2(sd.apply(one), f) < 1e-6);
    const GridFunction w = wave_apply(f, 0.5, 1.0, b);
    GridFunction expected(g);
    for (int k : {0, 2, 4}) {
        const double lam = 2.0 * k + 1.0;
        expected += std::pow(lam, -0.25) * std::polar(1.0, std::sqrt(lam)) * b.phi[k];
    }
    CHECK(rel_l2(w, expected) < 1e-6);
}

TEST_CASE("multiplier kernel tail bound is reported") {
    const Grid g = make_grid(1, 64, 16.0);
    const LaguerreBasis b = make_basis(g, 16);
    const MultiplierKernel mk = multiplier_kernel(heat_symbol(1.0), b);
    CHECK(mk.tail_bound >= 0.0);
    CHECK(mk.tail_bound < 1e-10);
    CHECK(max_abs_diff(mk.kernel, heat_kernel(1.0, g)) < 1e-10);
}
