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

#include <cstddef>
#include <vector>

namespace twistlab {

// Gauss-Legendre rule with `count` nodes on [a, b].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int count, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre rule: `panels` equal panels on [a, b] with
// `per_panel` nodes each.
QuadratureRule gauss_legendre_panels(int panels, int per_panel, double a, double b);

// Finite difference weights for the derivative of order `deriv` at x0
// from samples at `nodes` (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int deriv);

// Smooth transition: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);

// Compactly supported bump exp(c (1 - 1/(1 - t^2))) on |t| < 1, peak 1 at 0.
double bump(double t, double c = 1.0);
double bump_derivative(double t, double c = 1.0);

}  // namespace twistlab
