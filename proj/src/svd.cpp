#include "mmid/svd.hpp"

#include <algorithm>
#include <cmath>

namespace mmid {

namespace {

constexpr double kJacobiTol = 1e-15;
constexpr int kMaxSweeps = 60;

// One-sided cyclic Jacobi on the columns of w (m x n, m >= n is not
// required). Each rotation diagonalizes the 2x2 Gram block of a column pair.
// If v is non-null the rotations are accumulated into it.
void jacobi_orthogonalize(DataMatrix &w, DataMatrix *v) {
    const std::size_t n = w.cols(), m = w.rows();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    app += wp * wp;
                    aqq += wq * wq;
                    apq += wp * wq;
                }
                if (std::abs(apq) <= kJacobiTol * std::sqrt(app * aqq)) continue;
                rotated = true;

                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = ((zeta >= 0.0) ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                if (v) {
                    for (std::size_t i = 0; i < v->rows(); ++i) {
                        const double vp = (*v)(i, p), vq = (*v)(i, q);
                        (*v)(i, p) = c * vp - s * vq;
                        (*v)(i, q) = s * vp + c * vq;
                    }
                }
            }
        }
        if (!rotated) break;
    }
}

}  // namespace

std::vector<double> singular_values(const DataMatrix &a) {
    a.require_finite("singular_values");
    DataMatrix w = (a.cols() <= a.rows()) ? a : a.transposed();
    jacobi_orthogonalize(w, nullptr);
    std::vector<double> sigma(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) sigma[j] = column_norm(w, j);
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

double spectral_norm(const DataMatrix &a) { return singular_values(a)[0]; }

ThinSvd thin_svd(const DataMatrix &a) {
    a.require_finite("thin_svd");
    if (a.rows() < a.cols()) throw DimensionMismatch("thin_svd requires rows >= cols");
    ThinSvd out;
    out.u = a;
    out.v = DataMatrix::identity(a.cols());
    jacobi_orthogonalize(out.u, &out.v);
    out.sigma.resize(a.cols());

    // Sort columns by descending singular value; normalize nonzero ones.
    std::vector<std::size_t> order(a.cols());
    std::vector<double> norms(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        order[j] = j;
        norms[j] = column_norm(out.u, j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    DataMatrix u(a.rows(), a.cols()), v(a.cols(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const std::size_t src = order[j];
        out.sigma[j] = norms[src];
        for (std::size_t i = 0; i < a.cols(); ++i) v(i, j) = out.v(i, src);
        if (norms[src] > 0.0)
            for (std::size_t i = 0; i < a.rows(); ++i) u(i, j) = out.u(i, src) / norms[src];
    }
    out.u = std::move(u);
    out.v = std::move(v);
    return out;
}

DataMatrix least_squares_min_norm(const DataMatrix &b, const DataMatrix &a, double rel_tol) {
    if (b.rows() != a.rows()) throw DimensionMismatch("least_squares_min_norm: row counts differ");
    const ThinSvd svd = thin_svd(b);
    const double cutoff = svd.sigma.empty() ? 0.0 : rel_tol * svd.sigma[0];

    // x = V diag(1/sigma) U^T a, skipping singular values below the cutoff.
    DataMatrix uta = multiply_transpose_a(svd.u, a);  // r x N
    for (std::size_t l = 0; l < svd.sigma.size(); ++l) {
        const double inv = (svd.sigma[l] > cutoff) ? 1.0 / svd.sigma[l] : 0.0;
        for (std::size_t j = 0; j < uta.cols(); ++j) uta(l, j) *= inv;
    }
    return multiply(svd.v, uta);
}

}  // namespace mmid
