#ifndef MMID_QR_HPP
#define MMID_QR_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mmid/matrix.hpp"

namespace mmid {

// Column-pivoted Householder QR: A * P = Q * R with greedy max-residual-norm
// pivoting (Businger-Golub). `pivots` is a permutation of 0..N-1 whose first
// `rank` entries are the selected columns in selection order.
struct PivotedQr {
    DataMatrix q;                      // M x k, orthonormal columns
    DataMatrix r;                      // k x N, upper-trapezoidal in pivot order
    std::vector<std::size_t> pivots;   // permutation of column indices
    std::size_t rank = 0;              // achieved factorization rank k

    // |R(k,k)| <= rel_tol * |R(0,0)| marks column k as dependent.
    std::size_t numerical_rank(double rel_tol = 1e-12) const;
};

// Factorization truncated at `rank_cap` steps when given; otherwise proceeds
// to min(M, N) or until the residual block is exactly zero. Residual column
// norms are downdated with recomputation when cancellation is detected.
PivotedQr qr_column_pivoted(const DataMatrix &a,
                            std::optional<std::size_t> rank_cap = std::nullopt);

// Least-squares interpolation weights for a prescribed basis column subset:
// C = argmin ||A - A(:, basis) C||_F with C(:, basis) = I. Runs the same
// Householder sweep as qr_column_pivoted but with the pivot order forced to
// `basis`, so when `basis` equals the greedy pivot prefix the weights match
// the QR-based ID bit for bit. residual_sq comes from the reflector tail,
// which is cancellation-free.
struct PrescribedBasisFit {
    DataMatrix coefficients;  // r x N, original column order (empty if skipped)
    double residual_sq = 0.0; // valid iff `complete`
    bool complete = false;    // sweep performed all r steps (no exact dependence)
    bool rank_ok = false;     // A(:, basis) passed the 1e-12 diagonal threshold
};
PrescribedBasisFit prescribed_basis_fit(const DataMatrix &a,
                                        std::span<const std::size_t> basis,
                                        bool want_coefficients = true);

// Interpolation coefficients [I | R11^{-1} R12] P^T from a (possibly
// truncated) pivoted factorization. Throws RankDeficient when R11 fails the
// 1e-12 relative diagonal test.
DataMatrix id_coefficients_from_r(const DataMatrix &r, const std::vector<std::size_t> &pivots,
                                  std::size_t rank, std::size_t n);

DataMatrix permuted_copy(const DataMatrix &a, const std::vector<std::size_t> &pivots);

}  // namespace mmid

#endif
