#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace isingmis::detail {

// Minimal dense matrix for the small (<= 20 x 20) problems in the theory
// diagnostics.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                 static_cast<std::size_t>(j)];
    }
    double operator()(int i, int j) const {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                 static_cast<std::size_t>(j)];
    }
};

inline Matrix matmul(const Matrix& x, const Matrix& y) {
    Matrix out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            const double v = x(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) out(i, j) += v * y(k, j);
        }
    }
    return out;
}

inline Matrix submatrix(const Matrix& m, const std::vector<int>& row_idx,
                        const std::vector<int>& col_idx) {
    Matrix out(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        for (std::size_t j = 0; j < col_idx.size(); ++j) {
            out(static_cast<int>(i), static_cast<int>(j)) = m(row_idx[i], col_idx[j]);
        }
    }
    return out;
}

// Max absolute row sum.
inline double inf_norm(const Matrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += std::abs(m(i, j));
        best = best > s ? best : s;
    }
    return best;
}

// Eigenvalues of a symmetric matrix by the cyclic Jacobi method, ascending.
inline std::vector<double> jacobi_eigenvalues(Matrix m) {
    const int n = m.rows;
    if (n == 0) return {};
    double scale = 0.0;
    for (double v : m.a) scale += v * v;
    scale = std::sqrt(scale) + 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) off += 2.0 * m(p, q) * m(p, q);
        }
        if (std::sqrt(off) < 1e-14 * scale) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double tau = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = m(k, p);
                    const double mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = m(p, k);
                    const double mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = m(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

// Gauss-Jordan inverse with partial pivoting; returns false when singular.
inline bool invert_in_place(Matrix& m) {
    const int n = m.rows;
    Matrix inv(n, n);
    for (int i = 0; i < n; ++i) inv(i, i) = 1.0;
    double scale = inf_norm(m) + 1e-300;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
        }
        if (std::abs(m(pivot, col)) < 1e-12 * scale) return false;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(m(pivot, j), m(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const double d = m(col, col);
        for (int j = 0; j < n; ++j) {
            m(col, j) /= d;
            inv(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    m = std::move(inv);
    return true;
}

}  // namespace isingmis::detail
