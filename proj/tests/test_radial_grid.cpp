#include <doctest.h>

#include <cmath>
#include <random>

#include "flc/radial_grid.hpp"

using namespace flc;

namespace {
double int_pow(double x, int n) {
    double a = 1.0;
    for (int k = 0; k < n; ++k) a *= x;
    return a;
}
}  // namespace

TEST_CASE("build_grid rejects bad specs") {
    CHECK_THROWS_AS(build_grid(GridSpec{1, 1.0, 3}), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(GridSpec{1, 0.0, 8}), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(GridSpec{1, -1.0, 8}), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(GridSpec{0, 1.0, 8}), std::invalid_argument);
}

TEST_CASE("uniform 1-D weights") {
    const GridPtr g = build_grid(GridSpec{1, 1.0, 4});
    for (int i = 0; i < 4; ++i) CHECK(g->volume_weight(i) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g->total_weight() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g->face_radius(0) == 0.0);
    CHECK(g->face_radius(4) == 1.0);
}

TEST_CASE("n=2 weights follow the face-volume difference rule") {
    // hand evaluation of (f_{i+1}^2 - f_i^2)/2 at N=4
    const GridPtr g = build_grid(GridSpec{2, 1.0, 4});
    const double f[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int i = 0; i < 4; ++i)
        CHECK(g->volume_weight(i) ==
              doctest::Approx((f[i + 1] * f[i + 1] - f[i] * f[i]) / 2).epsilon(1e-15));
}

TEST_CASE("weight sum telescopes to R^n/n within 4 ulps") {
    for (int n = 1; n <= 5; ++n) {
        for (int N : {4, 64, 1024, 4096}) {
            for (double R : {1.0, 2.0, 0.7, 3.14159}) {
                const GridPtr g = build_grid(GridSpec{n, R, N});
                const double expect = int_pow(R, n) / n;
                const double err = std::abs(g->total_weight() - expect);
                CHECK(err <= 4.0 * std::abs(expect) * 2.220446049250313e-16);
            }
        }
    }
    const GridPtr g = build_grid(GridSpec{3, 2.0, 8});
    CHECK(g->total_weight() == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("cell centers are strictly increasing and positive") {
    const GridPtr g = build_grid(GridSpec{3, 2.5, 37});
    CHECK(g->cell_center(0) > 0.0);
    for (int i = 1; i < g->cells(); ++i) CHECK(g->cell_center(i) > g->cell_center(i - 1));
    for (int i = 0; i < g->cells(); ++i) CHECK(g->volume_weight(i) > 0.0);
}

TEST_CASE("cell_integral exact cases") {
    {
        const GridPtr g = build_grid(GridSpec{2, 1.0, 23});
        const CellField u = make_cell_field(g, 3.0);
        CHECK(cell_integral(u) == doctest::Approx(1.5).epsilon(1e-14));
    }
    {
        // midpoint rule is exact for linear integrands in 1-D
        const GridPtr g = build_grid(GridSpec{1, 1.0, 17});
        const CellField u = sample_cells(g, [](double r) { return r; });
        CHECK(cell_integral(u) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("cell_integral converges at second order against the exact integral") {
    // n=2, u(r)=r: integral of r^2 over (0,1) = 1/3
    auto err_at = [](int N) {
        const GridPtr g = build_grid(GridSpec{2, 1.0, N});
        const CellField u = sample_cells(g, [](double r) { return r; });
        return std::abs(cell_integral(u) - 1.0 / 3.0);
    };
    const double e64 = err_at(64);
    const double e128 = err_at(128);
    CHECK(e64 < 1e-4);
    CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("cumulative_integral") {
    const GridPtr g = build_grid(GridSpec{3, 1.5, 12});
    SUBCASE("constant field matches the closed-form measure") {
        const double c = 2.5;
        const CellField u = make_cell_field(g, c);
        const FaceField cum = cumulative_integral(u);
        CHECK(cum.v[0] == 0.0);
        for (int i = 1; i <= g->cells(); ++i) {
            const double f = g->face_radius(i);
            CHECK(cum.v[i] == doctest::Approx(c * f * f * f / 3.0).epsilon(1e-13));
        }
    }
    SUBCASE("last face equals cell_integral bitwise (same summation order)") {
        std::mt19937 rng(7u);
        std::uniform_real_distribution<double> d(0.0, 5.0);
        for (int trial = 0; trial < 20; ++trial) {
            CellField u{g, std::vector<double>(g->cells())};
            for (auto& x : u.v) x = d(rng);
            const FaceField cum = cumulative_integral(u);
            CHECK(cum.v[g->cells()] == cell_integral(u));
        }
    }
    SUBCASE("nonnegative field gives nondecreasing partial sums") {
        std::mt19937 rng(8u);
        std::uniform_real_distribution<double> d(0.0, 3.0);
        for (int trial = 0; trial < 100; ++trial) {
            CellField u{g, std::vector<double>(g->cells())};
            for (auto& x : u.v) x = d(rng);
            const FaceField cum = cumulative_integral(u);
            for (int i = 1; i <= g->cells(); ++i) CHECK(cum.v[i] >= cum.v[i - 1]);
        }
    }
}

TEST_CASE("derivative_field stencil exactness") {
    const GridPtr g = build_grid(GridSpec{1, 2.0, 32});
    SUBCASE("constants are annihilated exactly, all orders") {
        const CellField u = make_cell_field(g, 4.2);
        for (int order : {1, 2, 3}) {
            const DerivedField d = derivative_field(u, order);
            for (double x : d.values.v) CHECK(x == 0.0);
        }
    }
    SUBCASE("linear fields reproduced exactly on interior cells") {
        const CellField u = sample_cells(g, [](double r) { return 3.0 * r - 1.0; });
        const DerivedField d = derivative_field(u, 1);
        for (int i = 0; i < g->cells(); ++i)
            if (d.is_interior(i)) CHECK(d.values.v[i] == doctest::Approx(3.0).epsilon(1e-13));
    }
    SUBCASE("central first derivative exact on quadratics") {
        const CellField u = sample_cells(g, [](double r) { return r * r; });
        const DerivedField d = derivative_field(u, 1);
        for (int i = 0; i < g->cells(); ++i)
            if (d.is_interior(i))
                CHECK(d.values.v[i] == doctest::Approx(2.0 * g->cell_center(i)).epsilon(1e-12));
    }
}

TEST_CASE("derivative_field refinement study against cos(r)") {
    auto interior_err = [](int N) {
        const GridPtr g = build_grid(GridSpec{1, 1.0, N});
        const CellField u = sample_cells(g, [](double r) { return std::sin(r); });
        const DerivedField d = derivative_field(u, 1);
        double e = 0.0;
        for (int i = 0; i < g->cells(); ++i)
            if (d.is_interior(i))
                e = std::max(e, std::abs(d.values.v[i] - std::cos(g->cell_center(i))));
        return e;
    };
    const double e1 = interior_err(64);
    const double e2 = interior_err(128);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("derivative_field third order on cubics, interior") {
    const GridPtr g = build_grid(GridSpec{1, 1.0, 24});
    const CellField u = sample_cells(g, [](double r) { return r * r * r; });
    const DerivedField d = derivative_field(u, 3);
    CHECK(d.onesided_margin == 3);
    for (int i = 0; i < g->cells(); ++i)
        if (d.is_interior(i)) CHECK(d.values.v[i] == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("derivative_field rejects too-small grids") {
    const GridPtr g = build_grid(GridSpec{1, 1.0, 6});
    CHECK_NOTHROW(derivative_field(make_cell_field(g, 1.0), 2));
    CHECK_THROWS_AS(derivative_field(make_cell_field(g, 1.0), 3), std::invalid_argument);
}
