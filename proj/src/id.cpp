#include "mmid/id.hpp"

#include <cmath>
#include <cstdint>

namespace mmid {

namespace {

double residual_direct(const DataMatrix &l, const std::vector<std::size_t> &basis,
                       const DataMatrix &c) {
    const DataMatrix lr = l.select_cols(basis);
    return frobenius_norm_diff(l, multiply(lr, c));
}

}  // namespace

IdFactorization interpolative_decomposition(const DataMatrix &l, const IdTarget &target) {
    l.require_finite("interpolative_decomposition");
    const std::size_t n = l.cols();
    const std::size_t max_rank = std::min(l.rows(), n);

    std::size_t r = 0;
    PivotedQr f;
    if (target.rank) {
        r = *target.rank;
        if (r < 1 || r > max_rank)
            throw InvalidConfig("interpolative_decomposition: rank out of range");
        f = qr_column_pivoted(l, r);
        if (f.rank < r)
            throw RankDeficient("interpolative_decomposition: matrix rank below requested rank");
    } else {
        const double tol = target.tol.value_or(0.0);
        if (!(tol > 0.0)) throw InvalidConfig("interpolative_decomposition: tolerance must be > 0");
        f = qr_column_pivoted(l);

        // The rank-k residual is the trailing block of R; rows below k only
        // hold entries in columns >= k, so suffix row sums give it directly.
        std::vector<double> row_sq(f.rank, 0.0);
        for (std::size_t i = 0; i < f.rank; ++i)
            for (std::size_t j = i; j < n; ++j) row_sq[i] += f.r(i, j) * f.r(i, j);
        const double budget = tol * frobenius_norm(l);

        double tail = 0.0;
        for (double v : row_sq) tail += v;
        r = f.rank;
        double acc = tail;
        for (std::size_t k = 0; k < f.rank; ++k) {
            if (std::sqrt(std::max(acc, 0.0)) <= budget) {
                r = k;
                break;
            }
            acc -= row_sq[k];
        }
        if (r == 0) r = 1;  // rank zero is disallowed
    }

    IdFactorization out;
    out.rank = r;
    out.target_tol = target.tol;
    out.basis_indices.assign(f.pivots.begin(), f.pivots.begin() + static_cast<std::ptrdiff_t>(r));
    out.coefficients = id_coefficients_from_r(f.r, f.pivots, r, n);
    out.residual_fro = residual_direct(l, out.basis_indices, out.coefficients);
    return out;
}

DataMatrix reconstruct(const DataMatrix &l, const IdFactorization &f) {
    if (f.coefficients.cols() != l.cols() || f.coefficients.rows() != f.rank)
        throw DimensionMismatch("reconstruct: factorization inconsistent with matrix");
    for (std::size_t j : f.basis_indices)
        if (j >= l.cols()) throw DimensionMismatch("reconstruct: basis index out of range");
    return multiply(l.select_cols(f.basis_indices), f.coefficients);
}

DataMatrix bifidelity_reconstruct(const DataMatrix &h_r, const DataMatrix &c) {
    if (h_r.cols() != c.rows())
        throw DimensionMismatch("bifidelity_reconstruct: skeleton/coefficient shapes differ");
    return multiply(h_r, c);
}

DataMatrix sample_high_fidelity_basis(const HighFidelitySampler &hf,
                                      const std::vector<std::size_t> &basis_indices,
                                      const Rng &rng) {
    DataMatrix h_r(hf.output_length, basis_indices.size());
    const std::int64_t r = static_cast<std::int64_t>(basis_indices.size());
    bool bad_length = false;
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < r; ++k) {
        const std::size_t j = basis_indices[static_cast<std::size_t>(k)];
        Rng stream = rng.derive("hf", j);
        const std::vector<double> col = hf.sample(j, stream);
        if (col.size() != hf.output_length) {
            bad_length = true;
            continue;
        }
        h_r.set_col(static_cast<std::size_t>(k), col);
    }
    if (bad_length)
        throw SamplerFailure("high-fidelity sampler returned a wrong-length vector");
    return h_r;
}

BifidResult deterministic_bifid_pipeline(const DataMatrix &l, const HighFidelitySampler &hf,
                                         const IdTarget &target, const Rng &rng) {
    BifidResult out;
    out.factorization = interpolative_decomposition(l, target);
    out.h_r = sample_high_fidelity_basis(hf, out.factorization.basis_indices, rng);
    out.h_hat = bifidelity_reconstruct(out.h_r, out.factorization.coefficients);
    return out;
}

}  // namespace mmid
