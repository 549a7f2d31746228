#ifndef MMID_REF_LINALG_HPP
#define MMID_REF_LINALG_HPP

#include <span>
#include <vector>

#include "mmid/matrix.hpp"

// Serial reference implementations kept for testing and benchmarking. They
// use different algorithms from the production kernels (normal equations and
// two-sided Jacobi instead of Householder QR and one-sided Jacobi) so they
// can serve as independent oracles.
namespace mmid::ref {

DataMatrix matmul(const DataMatrix &a, const DataMatrix &b);
DataMatrix matmul_transpose_a(const DataMatrix &a, const DataMatrix &b);

double frobenius_norm(const DataMatrix &a);

// Solves (B^T B + lambda I) C = B^T A by Gaussian elimination with partial
// pivoting.
DataMatrix solve_normal_equations(const DataMatrix &b, const DataMatrix &a, double lambda);

// Eigenvalues of a symmetric matrix, descending, via two-sided cyclic
// Jacobi rotations.
std::vector<double> symmetric_eigenvalues(DataMatrix g);

// Singular values through the explicit Gram matrix of the smaller side.
std::vector<double> singular_values_via_gram(const DataMatrix &a);

// ||A - A(:, basis) C||_F^2 with C from the normal equations (lambda = 0).
double subset_residual_sq(const DataMatrix &a, std::span<const std::size_t> basis);

}  // namespace mmid::ref

#endif
