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

#include "twistlab/radial.hpp"
#include "twistlab/subordination.hpp"

#include <doctest.h>

#include <cmath>

using namespace twistlab;

TEST_CASE("spectral window") {
    CHECK(spectral_window(0.0, 100.0) == 1.0);
    CHECK(spectral_window(50.0, 100.0) == 1.0);
    CHECK(spectral_window(100.0, 100.0) == 0.0);
    const double mid = spectral_window(75.0, 100.0);
    CHECK(mid == doctest::Approx(0.5));
}

TEST_CASE("radial table interpolates the Laguerre series") {
    const MultiplierSpec heat{[](double lam) { return cplx(std::exp(-0.5 * lam), 0.0); }, -1};
    const RadialKernelTable tab(heat, 1, 200, 4.0, 0.01, false);
    CHECK(tab.K() == 200);
    for (double r : {0.0, 0.005, 0.31, 1.777, 3.9}) {
        CHECK(tab(r).real() == doctest::Approx(heat_kernel_value(0.5, 1, r * r)).epsilon(1e-7));
    }
    CHECK(tab(4.5) == cplx(0.0, 0.0));
}

TEST_CASE("cube source integrates smooth functions") {
    const Cube Q{{cplx(0.5, -0.5)}, 2.0};
    const PointSource one = cube_source([](const double*) { return cplx(1.0, 0.0); }, Q, 16);
    CHECK(one.nodes.size() == 256);
    cplx total(0.0, 0.0);
    for (const auto& v : one.values) total += v;
    CHECK(total.real() == doctest::Approx(4.0));
    const PointSource quad = cube_source([](const double* x) { return cplx(x[0] * x[0], 0.0); }, Q, 16);
    total = 0.0;
    for (const auto& v : quad.values) total += v;
    // int over [-0.5, 1.5] x [-1.5, 0.5] of x^2 = 2 * (1.5^3 + 0.5^3) / 3.
    CHECK(total.real() == doctest::Approx(2.0 * (3.375 + 0.125) / 3.0));
}

TEST_CASE("dipole atom has zero mean and unit scaled sup") {
    const double r = 0.5;
    const auto a = dipole_atom(r);
    const PointSource src = cube_source(a, Cube{{cplx(0.0, 0.0)}, r}, 32);
    cplx total(0.0, 0.0);
    double sup = 0.0;
    for (const auto& v : src.values) total += v;
    for (double x = -r / 2; x <= r / 2; x += r / 400) {
        const double p[2] = {x, 0.0};
        sup = std::max(sup, std::abs(a(p)));
    }
    CHECK(std::abs(total) < 1e-12);
    CHECK(sup == doctest::Approx(std::pow(r, -2.0)).epsilon(1e-3));
}

TEST_CASE("radial application matches a direct twisted convolution") {
    // Heat kernel applied to a Gaussian point cloud, compared with an explicit sum.
    const MultiplierSpec heat{[](double lam) { return cplx(std::exp(-lam), 0.0); }, -1};
    const RadialKernelTable tab(heat, 1, 120, 6.0, 0.005, false);
    const Cube Q{{cplx(0.0, 0.0)}, 1.0};
    const auto f = [](const double* x) { return cplx(1.0 + x[0], x[1]); };
    const PointSource src = cube_source(f, Q, 8);
    const double R = 2.0;
    const double hz = 0.1;
    double direct = 0.0;
    for (double x = -R + hz / 2; x < R; x += hz) {
        for (double y = -R + hz / 2; y < R; y += hz) {
            cplx s(0.0, 0.0);
            for (std::size_t q = 0; q < src.nodes.size(); ++q) {
                const cplx w = src.nodes[q][0];
                const double d2 = (x - w.real()) * (x - w.real()) + (y - w.imag()) * (y - w.imag());
                s += heat_kernel_value(1.0, 1, d2) * std::polar(1.0, 0.5 * (y * w.real() - x * w.imag())) * src.values[q];
            }
            direct += std::abs(s);
        }
    }
    direct *= hz * hz;
    CHECK(radial_apply_lp_norm(tab, src, R, hz, 1.0, 1) == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("wave probe norm is finite and positive") {
    WaveProbeOptions o;
    o.R = 1.5;
    o.k_scale = 64.0;
    o.quad_nodes = 32;
    const double v = wave_atom_l1_norm(1.0, 0.5, o);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
}
