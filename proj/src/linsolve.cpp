/// @file linsolve.cpp

#include "vvns/linsolve.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

namespace vvns {

namespace {

using EigenSparse = Eigen::SparseMatrix<double>;

EigenSparse to_eigen(const SparseMatrix& A) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.values.size());
    for (int r = 0; r < A.rows; ++r)
        for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
            trips.emplace_back(r, A.column_indices[k], A.values[k]);
    EigenSparse m(A.rows, A.cols);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

struct DirectSolver::Impl {
    Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
    bool analyzed = false;
    bool factorized = false;
    Eigen::Index rows = 0;
    Eigen::Index nnz = 0;
};

DirectSolver::DirectSolver() : impl_(std::make_unique<Impl>()) {}
DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

void DirectSolver::factorize(const SparseMatrix& A) {
    const EigenSparse m = to_eigen(A);
    if (!impl_->analyzed || impl_->rows != m.rows() || impl_->nnz != m.nonZeros()) {
        impl_->lu.analyzePattern(m);
        impl_->analyzed = true;
        impl_->rows = m.rows();
        impl_->nnz = m.nonZeros();
    }
    impl_->lu.factorize(m);
    if (impl_->lu.info() != Eigen::Success)
        throw SolveError("sparse LU factorization failed (singular matrix?)", 0.0);
    impl_->factorized = true;
}

std::vector<double> DirectSolver::solve(std::span<const double> b) const {
    if (!impl_->factorized) throw SolveError("solve called before factorize", 0.0);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
    Eigen::VectorXd x = impl_->lu.solve(rhs);
    return std::vector<double>(x.data(), x.data() + x.size());
}

bool DirectSolver::factorized() const { return impl_->factorized; }

std::vector<double> solve(const SparseMatrix& A, std::span<const double> b,
                          const SolverOptions& opts) {
    if (A.rows != A.cols) throw std::invalid_argument("solve: matrix not square");
    if (static_cast<int>(b.size()) != A.rows) throw std::invalid_argument("solve: rhs size");

    SparseMatrix M = A;
    std::vector<double> rhs(b.begin(), b.end());
    if (opts.pinned_dof >= 0) {
        // Replace the pinned row by an identity row.
        const int p = opts.pinned_dof;
        for (int k = M.row_offsets[p]; k < M.row_offsets[p + 1]; ++k)
            M.values[k] = (M.column_indices[k] == p) ? 1.0 : 0.0;
        rhs[p] = 0.0;
    }

    std::vector<double> x;
    if (opts.method == SolverOptions::Method::DirectLU) {
        DirectSolver lu;
        lu.factorize(M);
        x = lu.solve(rhs);
    } else {
        const EigenSparse m = to_eigen(M);
        Eigen::BiCGSTAB<EigenSparse, Eigen::IncompleteLUT<double>> krylov;
        krylov.setTolerance(opts.tol);
        krylov.setMaxIterations(opts.max_iter);
        krylov.compute(m);
        Eigen::VectorXd erhs = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
        Eigen::VectorXd ex = krylov.solve(erhs);
        if (krylov.info() != Eigen::Success)
            throw SolveError("Krylov solve did not converge", krylov.error());
        x.assign(ex.data(), ex.data() + ex.size());
    }

    const auto r = M.apply(x);
    double rn = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) rn += (r[i] - rhs[i]) * (r[i] - rhs[i]);
    rn = std::sqrt(rn);
    const double bn = norm2(rhs);
    if (rn > opts.tol * std::max(bn, 1e-300) && rn > 1e-12 * std::max(1.0, bn))
        throw SolveError("linear solve residual " + std::to_string(rn) + " exceeds tolerance", rn);
    return x;
}

SaddleResult solve_saddle(const SparseMatrix& Ablock, const SparseMatrix& B,
                          std::span<const double> rhs_u, std::span<const double> rhs_p,
                          const SolverOptions& opts,
                          std::span<const double> pressure_mean_weights) {
    const int nu = Ablock.rows;
    const int np = B.rows;
    const bool mean = !pressure_mean_weights.empty();
    const int total = nu + np + (mean ? 1 : 0);

    std::vector<Triplet> trips;
    trips.reserve(Ablock.nnz() + 2 * B.nnz() + 2 * np);
    for (int r = 0; r < nu; ++r)
        for (int k = Ablock.row_offsets[r]; k < Ablock.row_offsets[r + 1]; ++k)
            trips.push_back({r, Ablock.column_indices[k], Ablock.values[k]});
    for (int r = 0; r < np; ++r)
        for (int k = B.row_offsets[r]; k < B.row_offsets[r + 1]; ++k) {
            trips.push_back({nu + r, B.column_indices[k], B.values[k]});       // B u
            trips.push_back({B.column_indices[k], nu + r, -B.values[k]});      // -B^T p
        }
    if (mean)
        for (int i = 0; i < np; ++i) {
            trips.push_back({nu + np, nu + i, pressure_mean_weights[i]});
            trips.push_back({nu + i, nu + np, pressure_mean_weights[i]});
        }

    const SparseMatrix S = SparseMatrix::from_triplets(total, total, std::move(trips));
    std::vector<double> rhs(total, 0.0);
    std::copy(rhs_u.begin(), rhs_u.end(), rhs.begin());
    std::copy(rhs_p.begin(), rhs_p.end(), rhs.begin() + nu);

    SolverOptions inner = opts;
    inner.pinned_dof = -1;
    const auto x = solve(S, rhs, inner);

    SaddleResult res;
    res.velocity.assign(x.begin(), x.begin() + nu);
    res.pressure.assign(x.begin() + nu, x.begin() + nu + np);
    const auto ax = S.apply(x);
    double rn = 0.0, bn = 0.0;
    for (int i = 0; i < total; ++i) {
        rn += (ax[i] - rhs[i]) * (ax[i] - rhs[i]);
        bn += rhs[i] * rhs[i];
    }
    res.residual = std::sqrt(rn) / std::max(std::sqrt(bn), 1e-300);
    return res;
}

}  // namespace vvns
