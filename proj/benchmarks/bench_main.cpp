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
#include "twistlab/conv.hpp"
#include "twistlab/laguerre.hpp"
#include "twistlab/propagators.hpp"
#include "twistlab/subordination.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace twistlab;

namespace {

GridFunction input(const Grid& g) {
    return sample(g, [](const double* x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return cplx(std::exp(-0.3 * r2) * (1.0 + x[0]), 0.2 * x[1] * std::exp(-0.5 * r2));
    });
}

void BM_ConvDirect(benchmark::State& state) {
    const Grid g = make_grid(1, static_cast<int>(state.range(0)), 10.0);
    const GridFunction f = input(g);
    const KernelSamples k = phi_kernel(1, g);
    for (auto _ : state) benchmark::DoNotOptimize(twisted_conv_direct(f, k));
}
BENCHMARK(BM_ConvDirect)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ConvFast(benchmark::State& state) {
    const Grid g = make_grid(1, static_cast<int>(state.range(0)), 10.0);
    const GridFunction f = input(g);
    const KernelSamples k = phi_kernel(1, g);
    for (auto _ : state) benchmark::DoNotOptimize(twisted_conv_fast(f, k, 1));
}
BENCHMARK(BM_ConvFast)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SpectralProjections(benchmark::State& state) {
    const Grid g = make_grid(1, 128, 16.0);
    const LaguerreBasis b = make_basis(g, static_cast<int>(state.range(0)));
    const GridFunction f = input(g);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_projections(f, b));
}
BENCHMARK(BM_SpectralProjections)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ProjectionPiQ(benchmark::State& state) {
    const Grid g = make_grid(1, 128, 16.0);
    const Cube Q{{cplx(0.0, 0.0)}, 4.0};
    const ProjectionBasis basis(g, Q, static_cast<int>(state.range(0)), Q.center);
    const GridFunction f = input(g);
    for (auto _ : state) benchmark::DoNotOptimize(projection_PiQ(f, basis));
}
BENCHMARK(BM_ProjectionPiQ)->Arg(0)->Arg(2)->Arg(4);

void BM_KernelKj(benchmark::State& state) {
    const int j = static_cast<int>(state.range(0));
    SubordinationOptions o;
    o.build_psi_table = false;
    const SubordinationData d = compute_a_tau(default_chi(), std::ldexp(1.0, j), o);
    const std::vector<double> radii = default_radial_grid(j);
    for (auto _ : state) benchmark::DoNotOptimize(kernel_Kj(j, radii, d));
}
BENCHMARK(BM_KernelKj)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
