#include "mmid/least_squares.hpp"

#include <cmath>
#include <cstdint>

#include "mmid/qr.hpp"

namespace mmid {

DataMatrix ridge_least_squares(const DataMatrix &b, const DataMatrix &a, double lambda) {
    if (b.rows() != a.rows()) throw DimensionMismatch("ridge_least_squares: row counts differ");
    if (lambda < 0.0) throw InvalidConfig("ridge_least_squares: lambda must be >= 0");
    b.require_finite("ridge_least_squares");
    a.require_finite("ridge_least_squares");

    const std::size_t m = b.rows(), r = b.cols(), n = a.cols();

    DataMatrix aug = b;
    if (lambda > 0.0) {
        const double root = std::sqrt(lambda);
        aug = DataMatrix(m + r, r);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < r; ++j) aug(i, j) = b(i, j);
        for (std::size_t j = 0; j < r; ++j) aug(m + j, j) = root;
    }

    const PivotedQr f = qr_column_pivoted(aug);
    if (f.rank < r || f.numerical_rank() < r) {
        if (lambda == 0.0)
            throw RankDeficient("ridge_least_squares: basis is column rank deficient");
        throw RankDeficient("ridge_least_squares: augmented system rank deficient");
    }

    // C(pivot[l], j) from back-substitution of R z = Q^T [a_j; 0].
    DataMatrix rhs = a;
    if (lambda > 0.0) {
        DataMatrix padded(m + r, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) padded(i, j) = a(i, j);
        rhs = std::move(padded);
    }
    DataMatrix qta = multiply_transpose_a(f.q, rhs);

    DataMatrix c(r, n);
    const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t jj = 0; jj < nn; ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        for (std::size_t l = r; l-- > 0;) {
            double acc = qta(l, j);
            for (std::size_t t = l + 1; t < r; ++t) acc -= f.r(l, t) * c(f.pivots[t], j);
            c(f.pivots[l], j) = acc / f.r(l, l);
        }
    }
    return c;
}

}  // namespace mmid
