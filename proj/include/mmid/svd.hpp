#ifndef MMID_SVD_HPP
#define MMID_SVD_HPP

#include <vector>

#include "mmid/matrix.hpp"

namespace mmid {

// All min(M, N) singular values in non-increasing order. Computed by cyclic
// Jacobi acting on 2x2 Gram blocks of the side with fewer columns (one-sided
// form), which keeps small singular values at full relative accuracy; the
// explicitly formed Gram matrix would floor them at sqrt(machine eps).
std::vector<double> singular_values(const DataMatrix &a);

// Thin SVD a = u * diag(sigma) * v^T with u: M x N, v: N x N (requires
// M >= N). Columns of u belonging to zero singular values are left zero.
struct ThinSvd {
    DataMatrix u;
    std::vector<double> sigma;
    DataMatrix v;
};
ThinSvd thin_svd(const DataMatrix &a);

// Minimum-norm least squares via the pseudo-inverse; singular values below
// rel_tol * sigma_max are treated as zero.
DataMatrix least_squares_min_norm(const DataMatrix &b, const DataMatrix &a,
                                  double rel_tol = 1e-12);

}  // namespace mmid

#endif
