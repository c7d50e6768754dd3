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

#include "twistlab/conv.hpp"
#include "twistlab/laguerre.hpp"

#include <doctest.h>

#include <cmath>

using namespace twistlab;

namespace {

GridFunction test_input(const Grid& g) {
    return sample(g, [](const double* x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return cplx(std::exp(-0.4 * r2) * (1.0 - 0.5 * x[1]), 0.3 * x[0] * std::exp(-0.6 * r2));
    });
}

// f x g(z) = sum_w f(w) g(z - w) e^{(i/2) Im(z conj w)} h^2, written out naively.
GridFunction naive_conv(const GridFunction& f, const std::function<cplx(const double*)>& g) {
    const Grid& grid = f.grid;
    GridFunction out(grid);
    double z[2];
    double w[2];
    for (std::size_t i = 0; i < f.size(); ++i) {
        grid.point(i, z);
        cplx s(0.0, 0.0);
        for (std::size_t k = 0; k < f.size(); ++k) {
            grid.point(k, w);
            const double d[2] = {z[0] - w[0], z[1] - w[1]};
            s += f[k] * g(d) * std::polar(1.0, 0.5 * (z[1] * w[0] - z[0] * w[1]));
        }
        out[i] = s * grid.cell_volume();
    }
    return out;
}

}  // namespace

TEST_CASE("direct convolution matches the defining sum") {
    const Grid g = make_grid(1, 16, 6.0);
    const GridFunction f = test_input(g);
    const auto kern = [](const double* x) { return cplx(std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])), 0.2 * x[0]); };
    const GridFunction a = twisted_conv_direct(f, kernel_from_function(g, kern));
    const GridFunction b = naive_conv(f, kern);
    CHECK(max_abs_diff(a, b) < 1e-12);
}

TEST_CASE("fast and direct convolution agree") {
    for (int M : {16, 32}) {
        const Grid g = make_grid(1, M, 8.0);
        const GridFunction f = test_input(g);
        const KernelSamples k = phi_kernel(2, g);
        CHECK(max_abs_diff(twisted_conv_fast(f, k), twisted_conv_direct(f, k)) < 1e-11);
        CHECK(max_abs_diff(twisted_conv(f, k, ConvMode::Direct), twisted_conv_direct(f, k)) == 0.0);
    }
}

TEST_CASE("convolution plan reuses the left factor") {
    const Grid g = make_grid(1, 32, 8.0);
    const GridFunction f = test_input(g);
    const ConvPlan plan(f);
    CHECK(plan.grid() == g);
    for (int k = 0; k < 3; ++k) {
        const KernelSamples kern = phi_kernel(k, g);
        CHECK(max_abs_diff(plan.apply(kern), twisted_conv_fast(f, kern)) < 1e-13);
    }
}

TEST_CASE("fast convolution is independent of the worker count") {
    const Grid g = make_grid(1, 32, 8.0);
    const GridFunction f = test_input(g);
    const KernelSamples k = phi_kernel(1, g);
    CHECK(twisted_conv_fast(f, k, 1).values == twisted_conv_fast(f, k, 3).values);
}

TEST_CASE("Laguerre functions are twisted convolution projections") {
    // phi_j x phi_k = (2 pi)^n delta_jk phi_k.
    // Box wide enough that phi_k, k <= 4, is below 1e-9 at the edge.
    const Grid g = make_grid(1, 256, 24.0);
    for (int j = 0; j <= 3; ++j) {
        const GridFunction pj = phi_k(j, g);
        for (int k = 0; k <= 3; ++k) {
            const GridFunction c = twisted_conv_fast(pj, phi_kernel(k, g));
            if (j == k) {
                CHECK(rel_l2(c, 2.0 * kPi * pj) < 1e-6);
            } else {
                CHECK(lp_norm(c, 2.0) < 1e-6 * lp_norm(pj, 2.0));
            }
        }
    }
}

TEST_CASE("kernel from grid samples reproduces a closed form kernel") {
    const Grid g = make_grid(1, 128, 16.0);
    const GridFunction f = test_input(g);
    const KernelSamples exact = phi_kernel(0, g);
    const KernelSamples shifted = kernel_from_samples(phi_k(0, g));
    CHECK(rel_l2(twisted_conv_fast(f, shifted), twisted_conv_fast(f, exact)) < 1e-8);
}

TEST_CASE("mismatched grids are rejected") {
    const Grid a = make_grid(1, 16, 8.0);
    const Grid b = make_grid(1, 16, 4.0);
    CHECK_THROWS_AS(twisted_conv_direct(test_input(a), phi_kernel(0, b)), PreconditionError);
}
