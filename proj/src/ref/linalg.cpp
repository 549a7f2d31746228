#include "mmid/ref/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace mmid::ref {

DataMatrix matmul(const DataMatrix &a, const DataMatrix &b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("ref::matmul: inner dimensions differ");
    DataMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    return c;
}

DataMatrix matmul_transpose_a(const DataMatrix &a, const DataMatrix &b) {
    if (a.rows() != b.rows())
        throw DimensionMismatch("ref::matmul_transpose_a: row counts differ");
    DataMatrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, i) * b(k, j);
            c(i, j) = acc;
        }
    return c;
}

double frobenius_norm(const DataMatrix &a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

DataMatrix solve_normal_equations(const DataMatrix &b, const DataMatrix &a, double lambda) {
    if (b.rows() != a.rows())
        throw DimensionMismatch("ref::solve_normal_equations: row counts differ");
    const std::size_t r = b.cols(), n = a.cols();
    DataMatrix g = matmul_transpose_a(b, b);
    for (std::size_t i = 0; i < r; ++i) g(i, i) += lambda;
    DataMatrix rhs = matmul_transpose_a(b, a);

    // Gaussian elimination with partial pivoting on [G | rhs].
    std::vector<std::size_t> perm(r);
    for (std::size_t i = 0; i < r; ++i) perm[i] = i;
    for (std::size_t col = 0; col < r; ++col) {
        std::size_t p = col;
        for (std::size_t i = col + 1; i < r; ++i)
            if (std::abs(g(i, col)) > std::abs(g(p, col))) p = i;
        if (g(p, col) == 0.0) throw RankDeficient("ref::solve_normal_equations: singular system");
        if (p != col) {
            for (std::size_t j = 0; j < r; ++j) std::swap(g(col, j), g(p, j));
            for (std::size_t j = 0; j < n; ++j) std::swap(rhs(col, j), rhs(p, j));
        }
        for (std::size_t i = col + 1; i < r; ++i) {
            const double f = g(i, col) / g(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < r; ++j) g(i, j) -= f * g(col, j);
            for (std::size_t j = 0; j < n; ++j) rhs(i, j) -= f * rhs(col, j);
        }
    }
    DataMatrix c(r, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = r; i-- > 0;) {
            double acc = rhs(i, j);
            for (std::size_t k = i + 1; k < r; ++k) acc -= g(i, k) * c(k, j);
            c(i, j) = acc / g(i, i);
        }
    return c;
}

std::vector<double> symmetric_eigenvalues(DataMatrix g) {
    const std::size_t n = g.rows();
    if (n != g.cols()) throw DimensionMismatch("ref::symmetric_eigenvalues: matrix not square");
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += g(p, q) * g(p, q);
        if (off < 1e-28 * (1.0 + ref::frobenius_norm(g))) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (g(p, q) == 0.0) continue;
                const double theta = (g(q, q) - g(p, p)) / (2.0 * g(p, q));
                const double t = ((theta >= 0.0) ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < n; ++k) {
                    const double gpk = g(p, k), gqk = g(q, k);
                    g(p, k) = c * gpk - s * gqk;
                    g(q, k) = s * gpk + c * gqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double gkp = g(k, p), gkq = g(k, q);
                    g(k, p) = c * gkp - s * gkq;
                    g(k, q) = s * gkp + c * gkq;
                }
            }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = g(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
}

std::vector<double> singular_values_via_gram(const DataMatrix &a) {
    const DataMatrix w = (a.cols() <= a.rows()) ? a : a.transposed();
    const DataMatrix gram = matmul_transpose_a(w, w);
    std::vector<double> eig = symmetric_eigenvalues(gram);
    for (double &v : eig) v = std::sqrt(std::max(v, 0.0));
    return eig;
}

double subset_residual_sq(const DataMatrix &a, std::span<const std::size_t> basis) {
    const DataMatrix b = a.select_cols(basis);
    const DataMatrix c = solve_normal_equations(b, a, 0.0);
    const DataMatrix fit = matmul(b, c);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - fit.data()[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace mmid::ref
