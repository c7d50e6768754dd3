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

#include "twistlab/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace twistlab;

namespace {

GridFunction gaussian(const Grid& g, double cx = 0.0, double cy = 0.0, double a = 0.5) {
    return sample(g, [=](const double* x) {
        const double dx = x[0] - cx;
        const double dy = x[1] - cy;
        return cplx(std::exp(-a * (dx * dx + dy * dy)), 0.1 * dx * std::exp(-a * (dx * dx + dy * dy)));
    });
}

}  // namespace

TEST_CASE("grid geometry is cell centred and symmetric") {
    const Grid g = make_grid(1, 16, 8.0);
    CHECK(g.h == doctest::Approx(0.5));
    CHECK(g.size() == 256);
    CHECK(g.coord(0) == doctest::Approx(-3.75));
    CHECK(g.coord(15) == doctest::Approx(3.75));
    CHECK(g.cell_volume() == doctest::Approx(0.25));
    double x[2];
    g.point(g.flat(std::array<int, 2>{3, 5}), x);
    CHECK(x[0] == doctest::Approx(g.coord(3)));
    CHECK(x[1] == doctest::Approx(g.coord(5)));
    const Grid g2 = make_grid(2, 8, 4.0);
    CHECK(g2.size() == 4096);
    CHECK(g2.stride(0) == 512);
    CHECK(g2.stride(3) == 1);
}

TEST_CASE("symplectic form is antisymmetric and matches Im(z conj w)") {
    const CPoint z = {cplx(1.0, 2.0), cplx(-0.5, 0.25)};
    const CPoint w = {cplx(0.3, -1.0), cplx(2.0, 1.0)};
    cplx s(0.0, 0.0);
    for (int j = 0; j < 2; ++j) s += z[j] * std::conj(w[j]);
    CHECK(symplectic(z, w) == doctest::Approx(s.imag()));
    CHECK(symplectic(w, z) == doctest::Approx(-s.imag()));
    CHECK(symplectic(z, z) == doctest::Approx(0.0));
    const double zr[4] = {1.0, -0.5, 2.0, 0.25};
    const double wr[4] = {0.3, 2.0, -1.0, 1.0};
    CHECK(symplectic(zr, wr, 2) == doctest::Approx(s.imag()));
}

TEST_CASE("eighth order derivative is exact for low degree polynomials in the interior") {
    const Grid g = make_grid(1, 32, 8.0);
    const GridFunction f = sample(g, [](const double* x) { return cplx(x[0] * x[0] * x[0] - 2.0 * x[1], 0.0); });
    const GridFunction dx = partial(f, 0);
    const GridFunction dy = partial(f, 1);
    double x[2];
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.point(i, x);
        worst = std::max(worst, std::abs(dx[i] - cplx(3.0 * x[0] * x[0], 0.0)));
        worst = std::max(worst, std::abs(dy[i] - cplx(-2.0, 0.0)));
    }
    // One-sided boundary stencils are exact on these polynomials as well.
    CHECK(worst < 1e-9);
}

TEST_CASE("twisted Laplacian of the Gaussian ground state") {
    const Grid g = make_grid(1, 128, 16.0);
    const GridFunction phi0 = sample(g, [](const double* x) { return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1]) / 4.0), 0.0); });
    CHECK(rel_l2(apply_twisted_laplacian(phi0), phi0) < 1e-6);
}

TEST_CASE("vector fields satisfy [X, Y] = -i lambda") {
    const Grid g = make_grid(1, 128, 16.0);
    const GridFunction f = gaussian(g, 0.3, -0.2);
    for (int lambda : {1, -1}) {
        const GridFunction xy = apply_vector_field(apply_vector_field(f, 1, FieldKind::Y, lambda), 1, FieldKind::X, lambda);
        const GridFunction yx = apply_vector_field(apply_vector_field(f, 1, FieldKind::X, lambda), 1, FieldKind::Y, lambda);
        const GridFunction expected = cplx(0.0, -static_cast<double>(lambda)) * f;
        CHECK(rel_l2(xy - yx, expected) < 1e-6);
    }
}

TEST_CASE("twisted translations compose with the symplectic phase") {
    const Grid g = make_grid(1, 128, 16.0);
    const GridFunction f = gaussian(g);
    const CPoint w = {cplx(8 * g.h, -4 * g.h)};
    const CPoint v = {cplx(-2 * g.h, 6 * g.h)};
    const CPoint wv = {w[0] + v[0]};
    const GridFunction lhs = twisted_translate(twisted_translate(f, v), w);
    GridFunction rhs = twisted_translate(f, wv);
    rhs *= std::polar(1.0, -0.5 * symplectic(w, v));
    CHECK(rel_l2(lhs, rhs) < 1e-12);
}

TEST_CASE("off-lattice translation is rounded and reported") {
    const Grid g = make_grid(1, 32, 8.0);
    const TranslateResult r = twisted_translate_ex(gaussian(g), {cplx(0.3, 0.0)});
    CHECK(r.applied[0].real() == doctest::Approx(0.25));
    CHECK(r.rounding == doctest::Approx(0.05));
}

TEST_CASE("twgf files round trip exactly") {
    const Grid g = make_grid(1, 16, 5.0);
    const GridFunction f = gaussian(g, 0.1, 0.7, 0.3);
    const auto path = std::filesystem::temp_directory_path() / "twistlab_test_grid.twgf";
    write_twgf(path.string(), f);
    const GridFunction back = read_twgf(path.string());
    CHECK(back.grid == g);
    CHECK(back.values == f.values);
    std::filesystem::remove(path);
}

TEST_CASE("malformed twgf files are rejected") {
    const auto path = std::filesystem::temp_directory_path() / "twistlab_test_bad.twgf";
    {
        std::FILE* fp = std::fopen(path.string().c_str(), "w");
        std::fputs("twgf 1 1 8 4\n0 0\n", fp);
        std::fclose(fp);
    }
    CHECK_THROWS(read_twgf(path.string()));
    std::filesystem::remove(path);
}

TEST_CASE("norms") {
    const Grid g = make_grid(1, 128, 16.0);
    const GridFunction f = sample(g, [](const double* x) { return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2.0), 0.0); });
    // int exp(-|x|^2) = pi, int exp(-|x|^2 / 2) = 2 pi.
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
    CHECK(lp_norm(f, 1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-10));
    CHECK(max_abs(f) <= 1.0);
}
