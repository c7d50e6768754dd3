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

#include "twistlab/grid.hpp"
#include "twistlab/laguerre.hpp"
#include "twistlab/numerics.hpp"
#include "twistlab/propagators.hpp"

#include <functional>
#include <string>
#include <vector>

namespace twistlab {

// Smooth cutoff chi(u) supported in [lo, hi].
struct Chi {
    std::function<double(double)> fn;
    double lo = 0.5;
    double hi = 2.0;
    double sup = 1.0;
    std::string name;
};

// exp(4 (1 - 1/(1 - t^2))) with t = (u - 5/4)/(3/4): support [1/2, 2], sup 1.
Chi default_chi();
// dyadic_phi(u) u^{-delta}: the dyadic piece of the wave symbol, support [1/4, 4].
Chi wave_chi(double delta);

struct SubordinationOptions {
    int s_panel_nodes = 16;
    double s_panel_phase = 6.0;  // max phase change per s panel (radians)
    double u_max = 8.0;          // largest argument the s rule must resolve
    double w_oversample = 1.0;   // scales the w trapezoid density
    int psi_table_size = 0;      // 0: automatic
    bool build_psi_table = true;
    double plateau_lo = 3.0 / 32.0;
    double plateau_hi = 3.0;
};

// Cutoff in s: 1 on [plateau_lo, plateau_hi], 0 outside [1/16, 4], smooth in log2 s.
double s_cutoff(double s, double plateau_lo = 3.0 / 32.0, double plateau_hi = 3.0);

// Decomposition chi(tau^{-1} sqrt x) e^{i sqrt x}
//   = sqrt(tau) int e^{i tau / 4s} a_tau(s) e^{i s x / tau} ds + Psi_tau(x / tau^2).
struct SubordinationData {
    double tau = 16.0;
    Chi chi;
    SubordinationOptions opts;
    // s quadrature and the weighted amplitude A(s) = sqrt(tau) e^{i tau/4s} a_tau(s).
    QuadratureRule s_rule;
    std::vector<cplx> A;
    // Diagnostic samples of a_tau on s in [1/32, 8].
    std::vector<double> s_grid;
    std::vector<cplx> a_tau;
    // Psi_tau tabulated on a uniform grid u in [1/64, 8].
    double psi_u0 = 1.0 / 64.0;
    double psi_u1 = 8.0;
    std::vector<cplx> psi_table;

    // A(s) by direct w quadrature, cutoff included.
    cplx amplitude(double s) const;
    cplx a(double s) const;
    // chi(sqrt u) e^{i tau sqrt u}.
    cplx lhs(double u) const;
    // sqrt(tau) int e^{i tau/4s} a(s) e^{i s tau u} ds on s_rule.
    cplx rhs(double u) const;
    cplx psi_direct(double u) const { return lhs(u) - rhs(u); }
    // Table interpolation on [psi_u0, psi_u1], direct evaluation below, zero above.
    cplx psi(double u) const;
    double sup_a() const;
    double sup_psi() const;

    int w_nodes() const;
};

SubordinationData compute_a_tau(const Chi& chi, double tau, const SubordinationOptions& opts = {});

// Gauss-Legendre panels on [1/16, 4] whose widths keep the phase change of
// tau * max(u_max, 1/(4 s^2)) below the panel budget.
QuadratureRule subordination_s_rule(double tau, double freq_u, double freq_inv_s2, const SubordinationOptions& opts);

struct OscKernel {
    int j = 0;
    std::vector<double> r;
    std::vector<cplx> K;
    int node_budget = 0;
    double error_estimate = 0.0;
    std::vector<int> flags;  // radial indices where refinement disagrees
};

// K_j(r) = 2^{j/2} int e^{i 2^j/4s} a(s) k_{s 2^{-j}}(r) ds on the radial grid.
OscKernel kernel_Kj(int j, const std::vector<double>& radii, const SubordinationData& data, int n = 1,
                    double budget_scale = 0.5);

// Default radial grid on (0, 4] with max(512, 4 * 2^j) points.
std::vector<double> default_radial_grid(int j);

struct DecayReport {
    int j = 0;
    double slope = 0.0;
    double residual = 0.0;
    int node_budget = 0;
    std::vector<std::string> flags;
};

// Least-squares slope of log|K_j| against log(1 + 2^j |1 - r|) on |1 - r| in fit range.
DecayReport verify_kernel_decay(const OscKernel& K, double fit_lo = 0.2, double fit_hi = 1.0);
std::string to_json(const DecayReport& report);

// K_{j,Psi} as a multiplier kernel with m(lambda) = Psi(2^{-2j} lambda).
MultiplierSpec remainder_symbol(const SubordinationData& data);
GridFunction remainder_kernel(const SubordinationData& data, const LaguerreBasis& basis);
// Radial evaluation of (2 pi)^{-n} sum_{k <= K} m(2k+n) phi_k(r).
cplx multiplier_kernel_radial(const MultiplierSpec& m, int n, int K, double r);

// 2^{-j delta}(T_j f + Psi term) via spectral Schrodinger propagators.
// data must be built from wave_chi(delta) with tau = 2^j.
GridFunction wave_via_subordination(const SpectralDecomposition& f, int j, double delta,
                                    const SubordinationData& data);
// Same operator as a symbol on the spectrum.
cplx subordination_symbol(double lambda, int j, double delta, const SubordinationData& data);

}  // namespace twistlab
