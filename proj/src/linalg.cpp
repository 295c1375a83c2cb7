#include "bsd2/linalg.hpp"

#include <stdexcept>

namespace bsd2 {

QMatrix zero_matrix(size_t rows, size_t cols) { return QMatrix(rows, QVector(cols, Rational(0))); }

QMatrix identity_matrix(size_t n) {
    QMatrix m = zero_matrix(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMatrix transpose(const QMatrix& a) {
    if (a.empty()) return {};
    QMatrix t = zero_matrix(a[0].size(), a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

QMatrix multiply(const QMatrix& a, const QMatrix& b) {
    if (a.empty() || b.empty()) return {};
    const size_t n = a.size(), k = b.size(), m = b[0].size();
    QMatrix c = zero_matrix(n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j)
                if (b[l][j] != 0) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

QVector row_times(const QVector& row, const QMatrix& a) {
    if (a.empty()) return {};
    QVector out(a[0].size(), Rational(0));
    for (size_t l = 0; l < row.size(); ++l) {
        if (row[l] == 0) continue;
        for (size_t j = 0; j < out.size(); ++j)
            if (a[l][j] != 0) out[j] += row[l] * a[l][j];
    }
    return out;
}

std::vector<size_t> rref(QMatrix& a, size_t cols) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < a.size(); ++col) {
        size_t sel = row;
        while (sel < a.size() && a[sel][col] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[row], a[sel]);
        const Rational inv = 1 / a[row][col];
        for (size_t j = col; j < cols; ++j)
            if (a[row][j] != 0) a[row][j] *= inv;
        for (size_t i = 0; i < a.size(); ++i) {
            if (i == row || a[i][col] == 0) continue;
            const Rational f = a[i][col];
            for (size_t j = col; j < cols; ++j)
                if (a[row][j] != 0) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::vector<QVector> nullspace(QMatrix a, size_t cols) {
    const auto pivots = rref(a, cols);
    std::vector<bool> is_pivot(cols, false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<QVector> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        QVector v(cols, Rational(0));
        v[f] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

size_t rank(QMatrix a, size_t cols) { return rref(a, cols).size(); }

}  // namespace bsd2
