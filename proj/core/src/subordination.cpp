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

#include "twistlab/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace twistlab {

Chi default_chi() {
    Chi chi;
    chi.lo = 0.5;
    chi.hi = 2.0;
    chi.sup = 1.0;
    chi.name = "bump";
    chi.fn = [](double u) { return bump((u - 1.25) / 0.75, 4.0); };
    return chi;
}

Chi wave_chi(double delta) {
    Chi chi;
    chi.lo = 0.25;
    chi.hi = 4.0;
    chi.name = "wave";
    chi.fn = [delta](double u) { return u > 0.0 ? dyadic_phi(u) * std::pow(u, -delta) : 0.0; };
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) sup = std::max(sup, chi.fn(0.25 + 3.75 * i / 4000.0));
    chi.sup = sup;
    return chi;
}

double s_cutoff(double s, double plateau_lo, double plateau_hi) {
    if (!(s > 1.0 / 16.0 && s < 4.0)) return 0.0;
    const double l = std::log2(s);
    const double lo = std::log2(1.0 / 16.0);
    const double lo1 = std::log2(plateau_lo);
    const double hi1 = std::log2(plateau_hi);
    const double hi = 2.0;
    return smooth_step((l - lo) / (lo1 - lo)) * smooth_step((hi - l) / (hi - hi1));
}

QuadratureRule subordination_s_rule(double tau, double freq_u, double freq_inv_s2, const SubordinationOptions& opts) {
    QuadratureRule rule;
    const QuadratureRule base = gauss_legendre(opts.s_panel_nodes);
    const double a = 1.0 / 16.0;
    const double b = 4.0;
    double s = a;
    while (s < b) {
        const double freq = tau * (freq_u + freq_inv_s2 / (s * s)) + 1.0;
        const double width = std::min(b - s, std::max(opts.s_panel_phase / freq, 1e-9));
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            rule.nodes.push_back(s + 0.5 * width * (base.nodes[i] + 1.0));
            rule.weights.push_back(0.5 * width * base.weights[i]);
        }
        s += width;
    }
    return rule;
}

int SubordinationData::w_nodes() const {
    const double w_lo = chi.lo * chi.lo;
    const double w_hi = chi.hi * chi.hi;
    const double freq = tau * (0.5 / chi.lo + 4.0) + 2000.0;
    return static_cast<int>(std::ceil(opts.w_oversample * (w_hi - w_lo) * freq / (2.0 * kPi))) + 16;
}

cplx SubordinationData::amplitude(double s) const {
    const double cut = s_cutoff(s, opts.plateau_lo, opts.plateau_hi);
    if (cut == 0.0) return cplx(0.0, 0.0);
    const double w_lo = chi.lo * chi.lo;
    const double w_hi = chi.hi * chi.hi;
    const int N = w_nodes();
    const double dw = (w_hi - w_lo) / N;
    // Midpoint rule: the integrand is a compactly supported bump, so the
    // equispaced rule converges faster than any power of dw.
    const double w0 = w_lo + 0.5 * dw;
    const cplx step = std::polar(1.0, -tau * s * dw);
    cplx acc(0.0, 0.0);
    cplx twiddle(1.0, 0.0);
    for (int m = 0; m < N; ++m) {
        if ((m & 127) == 0) twiddle = std::polar(1.0, -tau * s * (w0 + m * dw));
        const double w = w0 + m * dw;
        const double c = chi.fn(std::sqrt(w));
        if (c != 0.0) acc += c * std::polar(1.0, tau * std::sqrt(w)) * twiddle;
        twiddle *= step;
    }
    return acc * (tau / (2.0 * kPi) * dw * cut);
}

cplx SubordinationData::a(double s) const {
    if (!(s > 0.0)) return cplx(0.0, 0.0);
    return amplitude(s) * std::polar(1.0 / std::sqrt(tau), -tau / (4.0 * s));
}

cplx SubordinationData::lhs(double u) const {
    if (!(u > 0.0)) return cplx(0.0, 0.0);
    const double v = std::sqrt(u);
    return chi.fn(v) * std::polar(1.0, tau * v);
}

cplx SubordinationData::rhs(double u) const {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < A.size(); ++i) {
        acc += s_rule.weights[i] * A[i] * std::polar(1.0, tau * u * s_rule.nodes[i]);
    }
    return acc;
}

cplx SubordinationData::psi(double u) const {
    if (u > 0.0 && u < psi_u0) return psi_direct(u);
    if (psi_table.size() < 4 || u < psi_u0 || u > psi_u1) return cplx(0.0, 0.0);
    const int N = static_cast<int>(psi_table.size());
    const double du = (psi_u1 - psi_u0) / (N - 1);
    const double x = (u - psi_u0) / du;
    int i0 = static_cast<int>(std::floor(x)) - 1;
    i0 = std::clamp(i0, 0, N - 4);
    // Four-point Lagrange interpolation.
    cplx out(0.0, 0.0);
    for (int k = 0; k < 4; ++k) {
        double wk = 1.0;
        for (int l = 0; l < 4; ++l) {
            if (l != k) wk *= (x - (i0 + l)) / static_cast<double>(k - l);
        }
        out += wk * psi_table[i0 + k];
    }
    return out;
}

double SubordinationData::sup_a() const {
    double m = 0.0;
    for (const auto& v : a_tau) m = std::max(m, std::abs(v));
    return m;
}

double SubordinationData::sup_psi() const {
    double m = 0.0;
    for (const auto& v : psi_table) m = std::max(m, std::abs(v));
    return m;
}

SubordinationData compute_a_tau(const Chi& chi, double tau, const SubordinationOptions& opts) {
    if (!(tau >= 1.0)) throw PreconditionError("compute_a_tau: tau must be at least 1");
    if (!chi.fn || !(chi.lo > 0.0) || !(chi.hi > chi.lo)) throw PreconditionError("compute_a_tau: invalid cutoff");
    SubordinationData d;
    d.tau = tau;
    d.chi = chi;
    d.opts = opts;
    d.s_rule = subordination_s_rule(tau, opts.u_max, 0.25, opts);
    d.A.resize(d.s_rule.nodes.size());
    parallel_for(d.A.size(), default_workers(), [&](std::size_t i) { d.A[i] = d.amplitude(d.s_rule.nodes[i]); });

    const int Ns = 2048;
    d.s_grid.resize(Ns);
    d.a_tau.resize(Ns);
    const double l0 = std::log2(1.0 / 32.0);
    const double l1 = std::log2(8.0);
    parallel_for(Ns, default_workers(), [&](std::size_t i) {
        d.s_grid[i] = std::exp2(l0 + (l1 - l0) * i / (Ns - 1.0));
        d.a_tau[i] = d.a(d.s_grid[i]);
    });

    if (opts.build_psi_table) {
        const int Nu = opts.psi_table_size > 0 ? opts.psi_table_size
                                               : std::max(2048, static_cast<int>(std::ceil(100.0 * tau)));
        d.psi_table.resize(Nu);
        parallel_for(Nu, default_workers(), [&](std::size_t i) {
            const double u = d.psi_u0 + (d.psi_u1 - d.psi_u0) * i / (Nu - 1.0);
            d.psi_table[i] = d.psi_direct(u);
        });
        if (d.sup_psi() > chi.sup) {
            throw NumericalError("compute_a_tau: remainder exceeds sup|chi|; quadrature failed");
        }
    }
    return d;
}

std::vector<double> default_radial_grid(int j) {
    const int N = std::max(512, 4 << j);
    std::vector<double> r(N);
    for (int i = 0; i < N; ++i) r[i] = 4.0 * (i + 1.0) / N;
    return r;
}

namespace {

std::vector<cplx> kj_pass(int j, const std::vector<double>& radii, const SubordinationData& data, int n,
                          double budget_scale, int& nodes_used) {
    const double tau = data.tau;
    double rmax = 0.0;
    for (double r : radii) rmax = std::max(rmax, r);
    SubordinationOptions o = data.opts;
    o.s_panel_phase = data.opts.s_panel_phase / budget_scale;
    const QuadratureRule rule = subordination_s_rule(tau, 0.25, 0.25 * std::max(1.0, rmax * rmax), o);
    nodes_used = static_cast<int>(rule.nodes.size());
    std::vector<cplx> wa(rule.nodes.size());
    parallel_for(wa.size(), default_workers(), [&](std::size_t i) {
        wa[i] = rule.weights[i] * data.amplitude(rule.nodes[i]);
    });
    // Skip nodes whose amplitude vanishes (outside the s cutoff).
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < wa.size(); ++i) {
        if (wa[i] != cplx(0.0, 0.0)) live.push_back(i);
    }
    std::vector<cplx> pre(live.size());
    std::vector<double> cot(live.size());
    for (std::size_t q = 0; q < live.size(); ++q) {
        const double sig = rule.nodes[live[q]] / tau;
        pre[q] = wa[live[q]] * std::pow(cplx(0.0, 1.0), n) * std::pow(4.0 * kPi * std::sin(sig), -n);
        cot[q] = 1.0 / std::tan(sig);
    }
    std::vector<cplx> K(radii.size());
    (void)j;
    parallel_for(radii.size(), default_workers(), [&](std::size_t i) {
        const double r2 = radii[i] * radii[i];
        cplx acc(0.0, 0.0);
        for (std::size_t q = 0; q < live.size(); ++q) acc += pre[q] * std::polar(1.0, -0.25 * cot[q] * r2);
        K[i] = acc;
    });
    return K;
}

}  // namespace

OscKernel kernel_Kj(int j, const std::vector<double>& radii, const SubordinationData& data, int n,
                    double budget_scale) {
    if (j < 0 || j > 10) throw PreconditionError("kernel_Kj: j must lie in [0, 10]");
    if (std::abs(data.tau - std::ldexp(1.0, j)) > 1e-12) throw PreconditionError("kernel_Kj: data built for another tau");
    OscKernel out;
    out.j = j;
    out.r = radii;
    int coarse_nodes = 0;
    const auto coarse = kj_pass(j, radii, data, n, budget_scale, coarse_nodes);
    out.K = kj_pass(j, radii, data, n, 2.0 * budget_scale, out.node_budget);
    double kmax = 0.0;
    for (const auto& v : out.K) kmax = std::max(kmax, std::abs(v));
    double err = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double diff = std::abs(out.K[i] - coarse[i]);
        err = std::max(err, diff);
        if (diff > 1e-5 * std::abs(out.K[i]) + 1e-12 * kmax) out.flags.push_back(static_cast<int>(i));
    }
    out.error_estimate = kmax > 0.0 ? err / kmax : 0.0;
    return out;
}

DecayReport verify_kernel_decay(const OscKernel& K, double fit_lo, double fit_hi) {
    DecayReport rep;
    rep.j = K.j;
    rep.node_budget = K.node_budget;
    double kmax = 0.0;
    for (const auto& v : K.K) kmax = std::max(kmax, std::abs(v));
    if (kmax == 0.0) throw NumericalError("verify_kernel_decay: degenerate (zero) kernel");
    if (K.flags.size() * 10 > K.r.size()) {
        throw NumericalError("verify_kernel_decay: quadrature flags cover more than 10% of nodes");
    }
    const double tau = std::ldexp(1.0, K.j);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int cnt = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < K.r.size(); ++i) {
        const double d = std::abs(1.0 - K.r[i]);
        if (d < fit_lo || d > fit_hi) continue;
        const double mag = std::abs(K.K[i]);
        if (mag <= 0.0) continue;
        const double x = std::log(1.0 + tau * d);
        const double y = std::log(mag);
        pts.emplace_back(x, y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 3) throw PreconditionError("verify_kernel_decay: fit range holds fewer than 3 nodes");
    const double den = cnt * sxx - sx * sx;
    rep.slope = (cnt * sxy - sx * sy) / den;
    const double icpt = (sy - rep.slope * sx) / cnt;
    double ss = 0.0;
    for (const auto& [x, y] : pts) ss += (y - icpt - rep.slope * x) * (y - icpt - rep.slope * x);
    rep.residual = std::sqrt(ss / cnt);
    if (!K.flags.empty()) {
        rep.flags.push_back("refinement_disagreement:" + std::to_string(K.flags.size()));
    }
    return rep;
}

std::string to_json(const DecayReport& report) {
    std::ostringstream s;
    s << std::setprecision(17);
    s << "{\"j\": " << report.j << ", \"slope\": " << report.slope << ", \"residual\": " << report.residual
      << ", \"node_budget\": " << report.node_budget << ", \"flags\": [";
    for (std::size_t i = 0; i < report.flags.size(); ++i) {
        s << (i ? ", " : "") << '"' << report.flags[i] << '"';
    }
    s << "]}";
    return s.str();
}

MultiplierSpec remainder_symbol(const SubordinationData& data) {
    MultiplierSpec m;
    const SubordinationData* d = &data;
    m.symbol = [d](double lambda) { return d->psi(lambda / (d->tau * d->tau)); };
    return m;
}

GridFunction remainder_kernel(const SubordinationData& data, const LaguerreBasis& basis) {
    if (data.psi_table.empty()) throw PreconditionError("remainder_kernel: subordination data has no remainder table");
    return multiplier_kernel(remainder_symbol(data), basis).kernel;
}

cplx multiplier_kernel_radial(const MultiplierSpec& m, int n, int K, double r) {
    const auto seq = laguerre_function_sequence(K, n - 1.0, 0.5 * r * r);
    cplx acc(0.0, 0.0);
    for (int k = 0; k <= K; ++k) acc += m(2.0 * k + n) * seq[k];
    return acc * std::pow(2.0 * kPi, -n);
}

cplx subordination_symbol(double lambda, int j, double delta, const SubordinationData& data) {
    const double tau = data.tau;
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < data.A.size(); ++i) {
        acc += data.s_rule.weights[i] * data.A[i] * std::polar(1.0, data.s_rule.nodes[i] * lambda / tau);
    }
    acc += data.psi(lambda / (tau * tau));
    return acc * std::exp2(-j * delta);
}

GridFunction wave_via_subordination(const SpectralDecomposition& f, int j, double delta,
                                    const SubordinationData& data) {
    if (j < 0 || j > 8) throw PreconditionError("wave_via_subordination: j must lie in [0, 8]");
    if (std::abs(data.tau - std::ldexp(1.0, j)) > 1e-12) {
        throw PreconditionError("wave_via_subordination: data built for another tau");
    }
    for (double s : data.s_rule.nodes) {
        const double t = s / data.tau;
        if (std::abs(std::sin(t)) <= 1e-8) throw PreconditionError("wave_via_subordination: singular time");
    }
    const auto& ev = f.basis().eigenvalues;
    std::vector<cplx> c(ev.size());
    for (std::size_t k = 0; k < ev.size(); ++k) c[k] = subordination_symbol(ev[k], j, delta, data);
    return f.apply(c);
}

}  // namespace twistlab
