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

// Randomized property checks. Each property is exercised over several
// seeds; failures print the seed through doctest's INFO.

#include "twistlab/atoms.hpp"
#include "twistlab/conv.hpp"
#include "twistlab/grid.hpp"
#include "twistlab/laguerre.hpp"
#include "twistlab/propagators.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

using namespace twistlab;

namespace {

// Sum of a few random complex Gaussians centred near the origin.
GridFunction random_bump_sum(const Grid& g, std::mt19937_64& rng, int terms = 4) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<cplx> c(terms);
    std::vector<double> cx(terms);
    std::vector<double> cy(terms);
    std::vector<double> a(terms);
    for (int k = 0; k < terms; ++k) {
        c[k] = cplx(n01(rng), n01(rng));
        cx[k] = n01(rng);
        cy[k] = n01(rng);
        a[k] = 0.5 + 0.5 * std::abs(n01(rng));
    }
    return sample(g, [&](const double* x) {
        cplx s(0.0, 0.0);
        for (int k = 0; k < terms; ++k) {
            const double dx = x[0] - cx[k];
            const double dy = x[1] - cy[k];
            s += c[k] * std::exp(-a[k] * (dx * dx + dy * dy));
        }
        return s;
    });
}

constexpr int kSeeds = 5;

}  // namespace

TEST_CASE("property: twisted convolution commutes with left twisted translation") {
    const Grid g = make_grid(1, 64, 16.0);
    for (int seed = 0; seed < kSeeds; ++seed) {
        INFO("seed " << seed);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> off(-6, 6);
        const GridFunction f = random_bump_sum(g, rng);
        const KernelSamples ks = kernel_from_function(g, [&](const double* x) {
            const double e = std::exp(-0.7 * (x[0] * x[0] + x[1] * x[1]));
            return cplx(e, 0.1 * x[1] * e);
        });
        const CPoint w = {cplx(off(rng) * g.h, off(rng) * g.h)};
        const GridFunction lhs = twisted_translate(twisted_conv_fast(f, ks), w);
        const GridFunction rhs = twisted_conv_fast(twisted_translate(f, w), ks);
        CHECK(rel_l2(lhs, rhs) < 1e-6);
    }
}

TEST_CASE("property: convolution is linear in the left factor") {
    const Grid g = make_grid(1, 32, 8.0);
    for (int seed = 0; seed < kSeeds; ++seed) {
        INFO("seed " << seed);
        std::mt19937_64 rng(100 + seed);
        std::normal_distribution<double> n01(0.0, 1.0);
        const GridFunction f1 = random_bump_sum(g, rng);
        const GridFunction f2 = random_bump_sum(g, rng);
        const cplx a(n01(rng), n01(rng));
        const KernelSamples ks = phi_kernel(seed % 3, g);
        const GridFunction lhs = twisted_conv_fast(f1 + a * f2, ks);
        const GridFunction rhs = twisted_conv_fast(f1, ks) + a * twisted_conv_fast(f2, ks);
        CHECK(max_abs_diff(lhs, rhs) < 1e-12 * (1.0 + max_abs(lhs)));
    }
}

TEST_CASE("property: heat flow contracts L2 at rate e^{-t}") {
    const Grid g = make_grid(1, 64, 16.0);
    for (int seed = 0; seed < kSeeds; ++seed) {
        INFO("seed " << seed);
        std::mt19937_64 rng(200 + seed);
        const GridFunction f = random_bump_sum(g, rng);
        const double norm0 = lp_norm(f, 2.0);
        for (double t : {0.1, 0.3, 1.0}) {
            const double now = lp_norm(heat_apply(f, t, Route::Kernel), 2.0);
            // ||e^{-tL} f|| <= e^{-t} ||f|| since the spectrum starts at 1.
            CHECK(now <= std::exp(-t) * norm0 * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("property: spectral projections are orthogonal and sum to band limited inputs") {
    // Box wide enough that phi_k, k <= 4, is below 1e-9 at the edge.
    const Grid g = make_grid(1, 256, 24.0);
    const LaguerreBasis b = make_basis(g, 8);
    for (int seed = 0; seed < kSeeds; ++seed) {
        INFO("seed " << seed);
        std::mt19937_64 rng(300 + seed);
        std::normal_distribution<double> n01(0.0, 1.0);
        GridFunction f(g);
        for (int k = 0; k <= 4; ++k) f += cplx(n01(rng), n01(rng)) * b.phi[k];
        const auto proj = spectral_projections(f, b);
        GridFunction total(g);
        for (const auto& p : proj) total += p;
        CHECK(rel_l2(total, f) < 1e-6);
        const ParsevalResult r = parseval_check(f, b);
        CHECK(r.rhs == doctest::Approx(r.lhs).epsilon(1e-6));
    }
}

TEST_CASE("property: random atoms are valid") {
    const Grid g = make_grid(1, 128, 16.0);
    for (int seed = 0; seed < kSeeds; ++seed) {
        INFO("seed " << seed);
        std::mt19937_64 rng(400 + seed);
        std::uniform_real_distribution<double> centre(-3.0, 3.0);
        std::uniform_int_distribution<int> pick(0, 2);
        const double ps[3] = {1.0, 2.0 / 3.0, 0.5};
        const double radii[3] = {4.0, 2.0, 1.0};
        const double p = ps[pick(rng)];
        const double r = radii[pick(rng)];
        const Atom a = make_atom(g, {cplx(centre(rng), centre(rng))}, r, p, 8.0, random_profile(seed, 1));
        const ValidationReport v = validate_atom(a);
        CHECK(v.valid());
        const SplitResult s = projection_split(a.f, a.cube, a.N0);
        CHECK(max_abs(s.b) < 1e-8 * max_abs(a.f));
    }
}

TEST_CASE("property: maximal dominance chain on random inputs") {
    const Grid g = make_grid(1, 32, 8.0);
    MaximalProfile prof = default_profile(g, 0.5);
    prof.t_grid = log_grid(1e-2, 1e1, 8);
    prof.w_grid = lattice_ball(g, 1.0);
    const double factor = std::ldexp(1.0, prof.N);
    for (int seed = 0; seed < kSeeds; ++seed) {
        INFO("seed " << seed);
        std::mt19937_64 rng(500 + seed);
        const GridFunction f = random_bump_sum(g, rng);
        const MaximalSet S = maximal_functions(f, prof);
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(S.heat[i].real() <= S.nontangential[i].real() + 1e-12);
            CHECK(S.nontangential[i].real() <= factor * S.tangential[i].real() + 1e-12);
        }
    }
}

TEST_CASE("property: twgf round trip on random data") {
    for (int seed = 0; seed < kSeeds; ++seed) {
        std::mt19937_64 rng(600 + seed);
        std::normal_distribution<double> n01(0.0, 1e3);
        const Grid g = make_grid(1, 8, 3.0);
        GridFunction f(g);
        for (auto& v : f.values) v = cplx(n01(rng), n01(rng) * 1e-300);
        const std::string path = "/tmp/twistlab_prop_" + std::to_string(seed) + ".twgf";
        write_twgf(path, f);
        CHECK(read_twgf(path).values == f.values);
        std::remove(path.c_str());
    }
}
