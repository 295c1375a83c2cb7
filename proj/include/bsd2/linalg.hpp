#pragma once

#include <vector>

#include "bsd2/arith.hpp"

namespace bsd2 {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row-major

QMatrix zero_matrix(size_t rows, size_t cols);
QMatrix identity_matrix(size_t n);
QMatrix transpose(const QMatrix& a);
QMatrix multiply(const QMatrix& a, const QMatrix& b);
QVector row_times(const QVector& row, const QMatrix& a);

// In-place reduced row echelon form; returns the pivot column of each
// nonzero row, in order. Rows past the rank are left as zero rows.
std::vector<size_t> rref(QMatrix& a, size_t cols);

// Basis of {x : a·x = 0}, one vector per free column.
std::vector<QVector> nullspace(QMatrix a, size_t cols);

size_t rank(QMatrix a, size_t cols);

}  // namespace bsd2
