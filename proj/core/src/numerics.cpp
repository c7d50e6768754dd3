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

#include "twistlab/numerics.hpp"

#include "twistlab/common.hpp"

#include <cmath>

namespace twistlab {

QuadratureRule gauss_legendre(int count, double a, double b) {
    if (count < 1) throw PreconditionError("gauss_legendre: count must be positive");
    QuadratureRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < (count + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (count == 1) p0 = 1.0;
            dp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        if (count == 1) {
            x = 0.0;
            dp = 1.0;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[count - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[count - 1 - i] = half * w;
    }
    return rule;
}

QuadratureRule gauss_legendre_panels(int panels, int per_panel, double a, double b) {
    if (panels < 1) throw PreconditionError("gauss_legendre_panels: panels must be positive");
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * per_panel);
    rule.weights.reserve(static_cast<std::size_t>(panels) * per_panel);
    const double width = (b - a) / panels;
    const QuadratureRule base = gauss_legendre(per_panel);
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        for (int i = 0; i < per_panel; ++i) {
            rule.nodes.push_back(lo + 0.5 * width * (base.nodes[i] + 1.0));
            rule.weights.push_back(0.5 * width * base.weights[i]);
        }
    }
    return rule;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int deriv) {
    const int n = static_cast<int>(nodes.size()) - 1;
    if (n < deriv) throw PreconditionError("fd_weights: too few nodes for derivative order");
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(deriv + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, deriv);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n + 1);
    for (int i = 0; i <= n; ++i) out[i] = c[i][deriv];
    return out;
}

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double bump(double t, double c) {
    const double s = 1.0 - t * t;
    if (s <= 0.0) return 0.0;
    return std::exp(c * (1.0 - 1.0 / s));
}

double bump_derivative(double t, double c) {
    const double s = 1.0 - t * t;
    if (s <= 0.0) return 0.0;
    return bump(t, c) * (-2.0 * c * t / (s * s));
}

}  // namespace twistlab
