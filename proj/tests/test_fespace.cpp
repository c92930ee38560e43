/// @file test_fespace.cpp

#include <cmath>
#include <random>

#include "doctest.h"
#include "vvns/fespace.hpp"
#include "vvns/quadrature.hpp"

using namespace vvns;

namespace {

/// Unit square split into two triangles, counterclockwise, no periodicity.
Mesh unit_square_mesh() {
    Mesh m;
    m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    m.boundary_edges = {{0, 1, Marker::wall}, {1, 2, Marker::wall},
                        {2, 3, Marker::wall}, {3, 0, Marker::wall}};
    return m;
}

}  // namespace

TEST_SUITE("fespace") {

TEST_CASE("dof counts on the torus") {
    const Mesh m = build_torus_mesh(2);
    CHECK(FiniteElementSpace::build(m, ElementType::P2Scalar).dof_count() == 16);
    CHECK(FiniteElementSpace::build(m, ElementType::P1Scalar).dof_count() == 4);
    CHECK(FiniteElementSpace::build(m, ElementType::P2Vector).dof_count() == 32);

    const Mesh m8 = build_torus_mesh(8);
    CHECK(FiniteElementSpace::build(m8, ElementType::P2Scalar).dof_count() == 4 * 64);
}

TEST_CASE("every dof appears in a cell and indices are in range") {
    const Mesh m = build_torus_mesh(3);
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar);
    std::vector<bool> seen(s.scalar_dof_count(), false);
    for (std::size_t t = 0; t < m.triangles.size(); ++t)
        for (int d : s.cell_dofs(static_cast<int>(t))) {
            REQUIRE(d >= 0);
            REQUIRE(d < s.scalar_dof_count());
            seen[d] = true;
        }
    for (bool b : seen) CHECK(b);
}

TEST_CASE("interpolation basics") {
    const Mesh m = build_torus_mesh(32);
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar);

    const Field zero = interpolate(s, ScalarFn([](double, double) { return 0.0; }));
    for (double c : zero.coeffs) CHECK(c == 0.0);

    const Field sx = interpolate(s, ScalarFn([](double x, double) { return std::sin(x); }));
    const double expected = M_PI * std::sqrt(2.0);  // sqrt(2 pi^2)
    CHECK(std::abs(l2_norm(sx) - expected) <= 1e-4 * expected);
}

TEST_CASE("quadratic reproduction on a plain mesh") {
    const Mesh m = unit_square_mesh();
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar);
    const auto f = [](double x, double y) { return 1.0 + x * x + 2.0 * x * y + y - 0.5 * y * y; };
    const Field fh = interpolate(s, ScalarFn(f));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (int k = 0; k < 25; ++k) {
        const double x = unif(rng), y = unif(rng);
        CHECK(std::abs(evaluate_at(fh, x, y) - f(x, y)) <= 1e-13);
    }
}

TEST_CASE("Taylor-Green field norms") {
    const Mesh m = build_torus_mesh(32);
    const auto vel = FiniteElementSpace::build(m, ElementType::P2Vector);
    const auto vort = FiniteElementSpace::build(m, ElementType::P2Scalar);
    const Field u = interpolate(vel, VectorFn([](double x, double y) {
        return std::array<double, 2>{std::sin(x) * std::cos(y), -std::cos(x) * std::sin(y)};
    }));
    const Field w = interpolate(vort, ScalarFn([](double x, double y) {
        return 2.0 * std::sin(x) * std::sin(y);
    }));
    const double u2 = l2_norm(u) * l2_norm(u);
    const double w2 = l2_norm(w) * l2_norm(w);
    CHECK(std::abs(u2 - 2.0 * M_PI * M_PI) <= 1e-3 * 2.0 * M_PI * M_PI);
    CHECK(std::abs(w2 - 4.0 * M_PI * M_PI) <= 1e-3 * 4.0 * M_PI * M_PI);
}

TEST_CASE("point evaluation") {
    const Mesh m = build_torus_mesh(32);
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar);
    Field one(s);
    for (auto& c : one.coeffs) c = 1.0;
    CHECK(evaluate_at(one, 1.234, 5.432) == doctest::Approx(1.0).epsilon(1e-13));

    const Field sx = interpolate(s, ScalarFn([](double x, double) { return std::sin(x); }));
    const auto vertex = s.dof_coord(7);
    CHECK(std::abs(evaluate_at(sx, vertex[0], vertex[1]) - std::sin(vertex[0])) <= 1e-14);
    CHECK(std::abs(evaluate_at(sx, 1.37, 2.91) - std::sin(1.37)) <= 1e-4);
}

TEST_CASE("points outside the mesh are rejected") {
    const Mesh m = unit_square_mesh();
    const auto s = FiniteElementSpace::build(m, ElementType::P1Scalar);
    Field f(s);
    CHECK(locate_point(m, -5.0, -5.0) == -1);
    CHECK_THROWS(evaluate_at(f, -5.0, -5.0));
}

TEST_CASE("zero-mean constraint applied on interpolation") {
    const Mesh m = build_torus_mesh(8);
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar, {.zero_mean = true});
    const Field f = interpolate(s, ScalarFn([](double x, double) { return std::sin(x) + 3.0; }));
    CHECK(std::abs(field_mean(f)) <= 1e-12);
}

TEST_CASE("Dirichlet constraints") {
    const Mesh m = build_channel_mesh({.h_near = 0.25, .h_far = 4.0, .growth = 1.6});
    SpaceConstraints c;
    c.dirichlet.push_back(
        {{Marker::inflow}, [](double, double) { return std::array<double, 2>{1.0, 0.0}; }});
    const auto s = FiniteElementSpace::build(m, ElementType::P2Vector, c);
    CHECK(!s.dirichlet_dofs().empty());
    for (const auto& [dof, val] : s.dirichlet_dofs()) {
        const int comp = dof % 2;
        CHECK(val == (comp == 0 ? 1.0 : 0.0));
        const auto xy = s.dof_coord(dof / 2);
        CHECK(xy[0] == doctest::Approx(-7.0).epsilon(1e-12));
    }

    // Dirichlet on a marker the mesh does not carry is rejected.
    const Mesh torus = build_torus_mesh(2);
    SpaceConstraints bad;
    bad.dirichlet.push_back(
        {{Marker::plate}, [](double, double) { return std::array<double, 2>{0.0, 0.0}; }});
    CHECK_THROWS(FiniteElementSpace::build(torus, ElementType::P2Vector, bad));
}

TEST_CASE("triangle quadrature integrates monomials exactly") {
    // Reference triangle (0,0),(1,0),(0,1): integral of x^a y^b is
    // a! b! / (a+b+2)!.
    const auto factorial = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    for (int degree : {4, 6}) {
        const auto& rule = triangle_rule(degree);
        for (int a = 0; a + 0 <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b) {
                double q = 0.0;
                for (std::size_t i = 0; i < rule.points.size(); ++i) {
                    const double x = rule.points[i][1];  // lambda_1 -> x
                    const double y = rule.points[i][2];  // lambda_2 -> y
                    q += rule.weights[i] * std::pow(x, a) * std::pow(y, b);
                }
                q *= 0.5;  // reference area
                const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                CHECK(std::abs(q - exact) <= 1e-14);
            }
    }
}

TEST_CASE("deterministic dof layout and norms") {
    const Mesh m = build_torus_mesh(6);
    const auto s1 = FiniteElementSpace::build(m, ElementType::P2Scalar);
    const auto s2 = FiniteElementSpace::build(m, ElementType::P2Scalar);
    REQUIRE(s1.dof_count() == s2.dof_count());
    for (int d = 0; d < s1.scalar_dof_count(); ++d) {
        CHECK(s1.dof_coord(d)[0] == s2.dof_coord(d)[0]);
        CHECK(s1.dof_coord(d)[1] == s2.dof_coord(d)[1]);
    }
    const Field f1 = interpolate(s1, ScalarFn([](double x, double y) { return std::sin(x + y); }));
    const Field f2 = interpolate(s2, ScalarFn([](double x, double y) { return std::sin(x + y); }));
    CHECK(l2_norm(f1) == l2_norm(f2));
    CHECK(h1_seminorm(f1) == h1_seminorm(f2));
}

}  // TEST_SUITE
