/// @file sparse.hpp
/// @brief CSR sparse matrix with deterministic triplet assembly.

#ifndef VVNS_SPARSE_HPP
#define VVNS_SPARSE_HPP

#include <span>
#include <vector>

namespace vvns {

struct Triplet {
    int row;
    int col;
    double value;
};

struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_offsets;     // size rows+1
    std::vector<int> column_indices;  // sorted, unique within each row
    std::vector<double> values;

    /// Duplicate (row,col) entries are summed in index order; structural
    /// zeros are kept so the sparsity pattern is value-independent.
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int nnz() const { return static_cast<int>(values.size()); }

    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> x) const;

    /// x^T A y
    double bilinear(std::span<const double> x, std::span<const double> y) const;

    SparseMatrix transposed() const;

    /// A + scale*B; patterns need not match.
    SparseMatrix plus(const SparseMatrix& other, double scale = 1.0) const;

    double max_abs() const;
};

}  // namespace vvns

#endif
