/// @file sparse.cpp

#include "vvns/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvns {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    for (const auto& t : triplets)
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::out_of_range("triplet index out of range");
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_offsets.assign(rows + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        std::size_t j = i + 1;
        double v = triplets[i].value;
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col) {
            v += triplets[j].value;
            ++j;
        }
        m.column_indices.push_back(triplets[i].col);
        m.values.push_back(v);
        ++m.row_offsets[triplets[i].row + 1];
        i = j;
    }
    for (int r = 0; r < rows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
    return m;
}

std::vector<double> SparseMatrix::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("apply: size mismatch");
    std::vector<double> y(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            sum += values[k] * x[column_indices[k]];
        y[r] = sum;
    }
    return y;
}

std::vector<double> SparseMatrix::apply_transpose(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != rows)
        throw std::invalid_argument("apply_transpose: size mismatch");
    std::vector<double> y(cols, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            y[column_indices[k]] += values[k] * x[r];
    return y;
}

double SparseMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
    if (static_cast<int>(x.size()) != rows || static_cast<int>(y.size()) != cols)
        throw std::invalid_argument("bilinear: size mismatch");
    double total = 0.0;
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            sum += values[k] * y[column_indices[k]];
        total += x[r] * sum;
    }
    return total;
}

SparseMatrix SparseMatrix::transposed() const {
    std::vector<Triplet> t;
    t.reserve(values.size());
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            t.push_back({column_indices[k], r, values[k]});
    return from_triplets(cols, rows, std::move(t));
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other, double scale) const {
    if (rows != other.rows || cols != other.cols)
        throw std::invalid_argument("plus: shape mismatch");
    std::vector<Triplet> t;
    t.reserve(values.size() + other.values.size());
    for (int r = 0; r < rows; ++r)
        for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
            t.push_back({r, column_indices[k], values[k]});
    for (int r = 0; r < other.rows; ++r)
        for (int k = other.row_offsets[r]; k < other.row_offsets[r + 1]; ++k)
            t.push_back({r, other.column_indices[k], scale * other.values[k]});
    return from_triplets(rows, cols, std::move(t));
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace vvns
