/// @file test_linsolve.cpp

#include <cmath>

#include "doctest.h"
#include "vvns/linsolve.hpp"
#include "vvns/operators.hpp"

using namespace vvns;

namespace {

SparseMatrix identity(int n) {
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

double residual_norm(const SparseMatrix& A, std::span<const double> x,
                     std::span<const double> b) {
    const auto ax = A.apply(x);
    double r = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) r += (ax[i] - b[i]) * (ax[i] - b[i]);
    return std::sqrt(r);
}

}  // namespace

TEST_SUITE("linsolve") {

TEST_CASE("identity and tridiagonal systems") {
    const std::vector<double> b = {1.0, 2.0, 3.0};
    const auto x = solve(identity(3), b);
    for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-14));

    // [2 -1 0; -1 2 -1; 0 -1 2] x = (1,1,1) has x = (1.5, 2, 1.5).
    std::vector<Triplet> t = {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0},
                              {1, 2, -1.0}, {2, 1, -1.0}, {2, 2, 2.0}};
    const auto A = SparseMatrix::from_triplets(3, 3, std::move(t));
    const std::vector<double> ones = {1.0, 1.0, 1.0};
    const auto y = solve(A, ones);
    CHECK(y[0] == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(y[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(y[2] == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("singular stiffness needs a pinned dof") {
    const Mesh m = build_torus_mesh(4);
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar);
    const SparseMatrix K = assemble_stiffness(s);

    // Incompatible rhs (nonzero mean) has no solution without pinning.
    Field ones_f(s);
    for (auto& c : ones_f.coeffs) c = 1.0;
    const auto bad = assemble_mass(s).apply(ones_f.coeffs);
    CHECK_THROWS_AS(solve(K, bad), SolveError);

    // Mean-zero rhs: (sin x, phi_i), compatible with the Neumann problem.
    const Field f = interpolate(s, ScalarFn([](double x, double) { return std::sin(x); }));
    const auto b = assemble_mass(s).apply(f.coeffs);

    SolverOptions opts;
    opts.pinned_dof = 0;
    const auto x = solve(K, b, opts);
    auto bp = std::vector<double>(b.begin(), b.end());
    bp[0] = 0.0;  // pinned row enforces x[0] = 0
    CHECK(x[0] == doctest::Approx(0.0).epsilon(1e-13));
    double bn = 0.0;
    for (double v : bp) bn += v * v;
    CHECK(residual_norm(K, x, bp) <= 2e-10 * std::sqrt(bn) + 1e-13);
}

TEST_CASE("saddle point solve on the torus") {
    const Mesh m = build_torus_mesh(4);
    const auto vel = FiniteElementSpace::build(m, ElementType::P2Vector, {.zero_mean = true});
    const auto pres = FiniteElementSpace::build(m, ElementType::P1Scalar, {.zero_mean = true});
    const SparseMatrix M = assemble_mass(vel);
    const SparseMatrix K = assemble_stiffness(vel);
    const SparseMatrix A = M.plus(K);
    const SparseMatrix B = assemble_divergence(vel, pres);

    const std::vector<double> zu(A.cols, 0.0), zp(B.rows, 0.0);
    const SaddleResult zero = solve_saddle(A, B, zu, zp, {}, pres.mean_weights());
    for (double v : zero.velocity) CHECK(std::abs(v) <= 1e-14);
    for (double v : zero.pressure) CHECK(std::abs(v) <= 1e-14);

    const Field f = interpolate(vel, VectorFn([](double x, double y) {
        return std::array<double, 2>{std::sin(x) * std::cos(y), -std::cos(x) * std::sin(y)};
    }));
    const auto rhs = M.apply(f.coeffs);
    const SaddleResult r = solve_saddle(A, B, rhs, zp, {}, pres.mean_weights());
    CHECK(r.residual <= 1e-10);

    double div_worst = 0.0;
    for (double v : B.apply(r.velocity)) div_worst = std::max(div_worst, std::abs(v));
    CHECK(div_worst <= 1e-10);

    double pmean = 0.0;
    for (std::size_t i = 0; i < r.pressure.size(); ++i)
        pmean += pres.mean_weights()[i] * r.pressure[i];
    CHECK(std::abs(pmean) <= 1e-10);
}

TEST_CASE("reusable direct solver matches one-shot solves") {
    const Mesh m = build_torus_mesh(4);
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar);
    const SparseMatrix M = assemble_mass(s);
    DirectSolver lu;
    CHECK(!lu.factorized());
    lu.factorize(M);
    CHECK(lu.factorized());

    const Field f = interpolate(s, ScalarFn([](double x, double y) { return std::sin(x + y); }));
    const auto x1 = lu.solve(f.coeffs);
    const auto x2 = solve(M, f.coeffs);
    for (std::size_t i = 0; i < x1.size(); ++i)
        CHECK(x1[i] == doctest::Approx(x2[i]).epsilon(1e-11));

    // Refactorize with a different matrix, same pattern.
    const SparseMatrix A = M.plus(assemble_stiffness(s));
    lu.factorize(A);
    const auto y = lu.solve(f.coeffs);
    CHECK(residual_norm(A, y, f.coeffs) <= 1e-10);
}

TEST_CASE("Krylov solver agrees with the direct solver") {
    const Mesh m = build_torus_mesh(8);
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar);
    const SparseMatrix A = assemble_mass(s).plus(assemble_stiffness(s));
    const Field f = interpolate(s, ScalarFn([](double x, double y) { return std::cos(x - y); }));

    SolverOptions krylov;
    krylov.method = SolverOptions::Method::Krylov;
    krylov.tol = 1e-12;
    const auto xk = solve(A, f.coeffs, krylov);
    const auto xd = solve(A, f.coeffs);
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < xk.size(); ++i) {
        diff += (xk[i] - xd[i]) * (xk[i] - xd[i]);
        ref += xd[i] * xd[i];
    }
    CHECK(std::sqrt(diff) <= 1e-8 * std::sqrt(ref));
}

TEST_CASE("solves are bitwise deterministic") {
    const Mesh m = build_torus_mesh(4);
    const auto s = FiniteElementSpace::build(m, ElementType::P2Scalar);
    const SparseMatrix A = assemble_mass(s).plus(assemble_stiffness(s));
    const Field f = interpolate(s, ScalarFn([](double x, double y) { return std::sin(2 * x - y); }));
    const auto x1 = solve(A, f.coeffs);
    const auto x2 = solve(A, f.coeffs);
    REQUIRE(x1.size() == x2.size());
    for (std::size_t i = 0; i < x1.size(); ++i) CHECK(x1[i] == x2[i]);
}

}  // TEST_SUITE
