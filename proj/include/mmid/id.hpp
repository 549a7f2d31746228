#ifndef MMID_ID_HPP
#define MMID_ID_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "mmid/matrix.hpp"
#include "mmid/qr.hpp"
#include "mmid/rng.hpp"

namespace mmid {

// Target for an interpolative decomposition: either a fixed rank or the
// smallest rank whose residual satisfies ||L - L_r C||_F <= tol * ||L||_F.
struct IdTarget {
    static IdTarget fixed_rank(std::size_t r) { return {r, std::nullopt}; }
    static IdTarget frobenius_tol(double tol) { return {std::nullopt, tol}; }

    std::optional<std::size_t> rank;
    std::optional<double> tol;
};

// L approx L(:, J) * C. Basis indices are stored in pivot (selection) order;
// the submatrix C(:, J) is the identity up to that ordering.
struct IdFactorization {
    std::vector<std::size_t> basis_indices;
    DataMatrix coefficients;  // r x N
    std::size_t rank = 0;
    double residual_fro = 0.0;
    std::optional<double> target_tol;
};

IdFactorization interpolative_decomposition(const DataMatrix &l, const IdTarget &target);

// L(:, J) * C.
DataMatrix reconstruct(const DataMatrix &l, const IdFactorization &f);

// H_hat = H_r * C; column count of h_r must equal the coefficient rank.
DataMatrix bifidelity_reconstruct(const DataMatrix &h_r, const DataMatrix &c);

// Produces the high-fidelity column for parametric input index j. The rng
// carries any hidden stochasticity; deterministic models ignore it. Calls at
// distinct j must be independent (they may run concurrently).
struct HighFidelitySampler {
    std::size_t output_length = 0;  // M_H
    std::function<std::vector<double>(std::size_t j, Rng &rng)> sample;
};

// Queries the sampler at the basis indices of `f`, in selection order, and
// assembles the M_H x r skeleton. Each column uses the substream
// rng.derive("hf", j) so the pairing of basis column and high-fidelity run
// is reproducible regardless of evaluation order.
DataMatrix sample_high_fidelity_basis(const HighFidelitySampler &hf,
                                      const std::vector<std::size_t> &basis_indices,
                                      const Rng &rng);

struct BifidResult {
    DataMatrix h_hat;
    IdFactorization factorization;
    DataMatrix h_r;
};

// Deterministic bi-fidelity pipeline: factor L, sample the high-fidelity
// model at the selected basis columns, and combine with the low-fidelity
// interpolation rule.
BifidResult deterministic_bifid_pipeline(const DataMatrix &l, const HighFidelitySampler &hf,
                                         const IdTarget &target, const Rng &rng);

}  // namespace mmid

#endif
