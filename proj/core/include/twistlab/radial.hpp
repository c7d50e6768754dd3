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

#pragma once

#include "twistlab/propagators.hpp"

#include <vector>

namespace twistlab {

// Smooth spectral window: 1 up to half of the top eigenvalue, 0 at the top.
double spectral_window(double lambda, double lambda_max);

// Radial samples of (2 pi)^{-n} sum_{k <= K} m(2k+n) W phi_k(rho) on
// [0, rho_max], W the spectral window (or 1). Degrees are unlimited.
class RadialKernelTable {
public:
    RadialKernelTable(const MultiplierSpec& m, int n, int K, double rho_max, double drho, bool windowed = true);

    int n() const { return n_; }
    int K() const { return K_; }
    double rho_max() const { return rho_max_; }
    // Cubic interpolation; zero beyond rho_max.
    cplx operator()(double rho) const;

private:
    int n_;
    int K_;
    double rho_max_;
    double drho_;
    std::vector<cplx> values_;
};

// Off-grid source for a twisted convolution: nodes w_q with weights folded
// into the values c_q = f(w_q) * quadrature weight.
struct PointSource {
    std::vector<CPoint> nodes;
    std::vector<cplx> values;
};

// Tensor Gauss-Legendre discretization of f on the cube (n = 1).
PointSource cube_source(const std::function<cplx(const double*)>& f, const Cube& cube, int nodes_per_axis);

// L^p norm over [-R, R]^2 (n = 1, midpoint rule of spacing hz) of
//   z -> sum_q K(|z - w_q|) e^{(i/2) Im(z . conj(w_q))} c_q.
double radial_apply_lp_norm(const RadialKernelTable& kernel, const PointSource& src, double R, double hz, double p,
                            int workers = 0);

// Smooth mean-zero p = 1 atom on Q(0, r) in C^1:
// r^{-2} b'(2x/r) b(2y/r) / sup|b'| with b = bump(., 4).
std::function<cplx(const double*)> dipole_atom(double r);

struct WaveProbeOptions {
    double t = 1.0;
    double R = 3.0;          // half-width of the output box
    int quad_nodes = 32;     // per axis on the cube
    double k_scale = 256.0;  // spectral truncation K = k_scale / r^2
    int k_max = 16384;
    double hz_factor = 0.1;  // output spacing min(hz_factor r, hz_cap)
    double hz_cap = 0.02;
    int workers = 0;
};

// ||L^{-delta/2} e^{i t sqrt(L)} a_r||_1 for the dipole atom of side r.
double wave_atom_l1_norm(double r, double delta, const WaveProbeOptions& opts = {});

}  // namespace twistlab
