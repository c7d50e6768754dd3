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

#include "twistlab/conv.hpp"
#include "twistlab/grid.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace twistlab {

// floor(2n(1/p - 1)): highest moment degree an atom must cancel.
int moment_degree(int n, double p);

// e^{(i/2) Im(z0 . conj(z))} for a real coordinate vector z.
cplx omega(const CPoint& z0, const double* z);

struct Atom {
    GridFunction f;
    Cube cube;
    double p = 1.0;
    double sigma = 1.0;
    int N0 = 0;
};

// Real polynomials e_1..e_J of degree <= degree in (w - center)/r,
// orthonormal for the normalized inner product on the cube samples, and
// the modulation point of h_k = e_k e^{-(i/2) Im(z_mod . conj(w))}.
class ProjectionBasis {
public:
    ProjectionBasis(const Grid& grid, const Cube& cube, int degree);
    ProjectionBasis(const Grid& grid, const Cube& cube, int degree, const CPoint& modulation);

    const Grid& grid() const { return grid_; }
    const Cube& cube() const { return cube_; }
    int degree() const { return degree_; }
    int dimension() const { return static_cast<int>(e_.size()); }
    const CPoint& modulation() const { return modulation_; }
    // Flat grid indices of the samples inside the cube.
    const std::vector<std::size_t>& support() const { return support_; }
    // e_k sampled on support().
    const std::vector<double>& polynomial(int k) const { return e_[k]; }
    // e^{-(i/2) Im(z_mod . conj(w))} on support().
    const std::vector<cplx>& phase() const { return phase_; }
    // h_k on the full grid (zero off the cube).
    GridFunction modulated(int k) const;
    // max |G - I| of the Gram matrix of e_k.
    double gram_defect() const;

private:
    Grid grid_;
    Cube cube_;
    int degree_ = 0;
    CPoint modulation_;
    std::vector<std::size_t> support_;
    std::vector<std::vector<double>> e_;
    std::vector<cplx> phase_;
};

// Number of real monomials of degree <= d in m variables.
std::size_t monomial_count(int m, int d);

// sum_k (f, h_k)_Q h_k.
GridFunction projection_PiQ(const GridFunction& f, const ProjectionBasis& basis);

struct SplitResult {
    GridFunction a;  // f - Pi_Q f
    GridFunction b;  // Pi_Q f
};
SplitResult projection_split(const GridFunction& f, const Cube& Q, int N0);

// Seed shape for make_atom on local coordinates u in [-1, 1]^{2n}.
using AtomProfile = std::function<cplx(const double* u)>;
AtomProfile bump_profile();
// Bump times a random smooth polynomial-trigonometric factor; reproducible per seed.
AtomProfile random_profile(std::uint64_t seed, int n);

// c (g - Pi_Q g) with sup normalized to r^{-2n/p}; no projection when r >= sigma.
Atom make_atom(const Grid& grid, const CPoint& z0, double r, double p, double sigma,
               const AtomProfile& profile = bump_profile());

struct MomentCheck {
    std::vector<int> alpha;
    std::vector<int> beta;
    double magnitude = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct ValidationReport {
    double support_leak = 0.0;  // max |f| outside the cube
    double sup_ratio = 0.0;     // sup |f| / r^{-2n/p}
    std::vector<MomentCheck> moments;
    bool support_ok = true;
    bool sup_ok = true;
    bool moments_ok = true;
    bool degenerate = false;
    bool valid() const { return support_ok && sup_ok && moments_ok; }
};

ValidationReport validate_atom(const Atom& a);

// Atom bundle: twgf samples plus a sidecar "z0 r p sigma N0".
void write_atom(const std::string& twgf_path, const Atom& a);
Atom read_atom(const std::string& twgf_path);
std::string atom_sidecar_path(const std::string& twgf_path);

// Member of the finite test family: supported in the unit cube Q(0, 1).
struct TestBump {
    std::string name;
    std::function<cplx(const double* x)> fn;
    double scale = 1.0;  // normalization factor already folded into fn
};

struct MaximalProfile {
    std::vector<double> t_grid;     // heat times, log spaced
    std::vector<CPoint> w_grid;     // lattice offsets for the cone maximal functions
    int N = 0;                      // tangential exponent and derivative order of the dictionary
    std::vector<TestBump> dictionary;
};

std::vector<double> log_grid(double lo, double hi, int count);
// Lattice offsets of `grid` with |w| <= radius.
std::vector<CPoint> lattice_ball(const Grid& grid, double radius);
// Twelve generators scaled so that |d^alpha phi| <= 1 for |alpha| <= N.
std::vector<TestBump> default_dictionary(int n, int N);
// t in [1e-2, 1e2] (25 points), |w| <= 2, N = 2 N0, full dictionary.
MaximalProfile default_profile(const Grid& grid, double p);

// Heat evolutions e^{-t L} f for every t of the profile.
std::vector<GridFunction> heat_family(const GridFunction& f, const MaximalProfile& profile, int workers = 0);

// max_t |e^{-t L} f|.
GridFunction heat_maximal(const GridFunction& f, const MaximalProfile& profile);
// max over phi in the dictionary and t_grid points below sigma of |f x phi_t|;
// scales below 4h are skipped because the grid does not resolve them.
GridFunction grand_maximal(const GridFunction& f, const MaximalProfile& profile, double sigma);
// Heat time tau = t^2: sup over |w| < t of |e^{-t^2 L} f(z - w)|, with t^2 on t_grid.
GridFunction nontangential_maximal(const GridFunction& f, const MaximalProfile& profile);
// sup over w of |e^{-t^2 L} f(z - w)| (1 + |w|/t)^{-N}.
GridFunction tangential_maximal(const GridFunction& f, int N, const MaximalProfile& profile);

struct MaximalSet {
    GridFunction heat;
    GridFunction nontangential;
    GridFunction tangential;
};
// All three cone-type maximal functions from one heat family.
MaximalSet maximal_functions(const GridFunction& f, const MaximalProfile& profile);

}  // namespace twistlab
