#ifndef MMID_LEAST_SQUARES_HPP
#define MMID_LEAST_SQUARES_HPP

#include "mmid/matrix.hpp"

namespace mmid {

// argmin_C ||A - B C||_F^2 + lambda ||C||_F^2, solved column-by-column
// through a QR factorization of the augmented matrix [B; sqrt(lambda) I].
// With lambda = 0 this is plain least squares and B must have full column
// rank (RankDeficient otherwise, by the pivoted-QR diagonal test).
DataMatrix ridge_least_squares(const DataMatrix &b, const DataMatrix &a, double lambda);

}  // namespace mmid

#endif
