/// @file linsolve.hpp
/// @brief Sparse direct / Krylov solves for the per-step linear systems.

#ifndef VVNS_LINSOLVE_HPP
#define VVNS_LINSOLVE_HPP

#include <memory>
#include <span>
#include <vector>

#include "vvns/sparse.hpp"

namespace vvns {

struct SolverOptions {
    enum class Method { DirectLU, Krylov };
    Method method = Method::DirectLU;
    double tol = 1e-10;   // relative residual
    int max_iter = 5000;  // Krylov only
    int pinned_dof = -1;  // row replaced by identity for zero-mean/Neumann systems
};

/// Solves Ax=b and verifies ||Ax-b|| <= tol*||b||. Throws SolveError on
/// breakdown, non-convergence, or a singular matrix without a pinned dof.
std::vector<double> solve(const SparseMatrix& A, std::span<const double> b,
                          const SolverOptions& opts = {});

struct SolveError : std::runtime_error {
    double residual;
    SolveError(const std::string& what, double res) : std::runtime_error(what), residual(res) {}
};

struct SaddleResult {
    std::vector<double> velocity;
    std::vector<double> pressure;
    double residual = 0.0;
};

/// Solves [Ablock, -B^T; B, 0] [u; p] = [rhs_u; rhs_p]. When
/// pressure_mean_weights is nonempty the pressure is constrained to zero
/// weighted mean through a Lagrange multiplier (periodic setting).
SaddleResult solve_saddle(const SparseMatrix& Ablock, const SparseMatrix& B,
                          std::span<const double> rhs_u, std::span<const double> rhs_p,
                          const SolverOptions& opts,
                          std::span<const double> pressure_mean_weights = {});

/// Reusable sparse LU; the symbolic analysis is cached across factorizations
/// with an identical sparsity pattern.
class DirectSolver {
public:
    DirectSolver();
    ~DirectSolver();
    DirectSolver(DirectSolver&&) noexcept;
    DirectSolver& operator=(DirectSolver&&) noexcept;

    void factorize(const SparseMatrix& A);
    std::vector<double> solve(std::span<const double> b) const;
    bool factorized() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace vvns

#endif
