#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmid/id.hpp"
#include "mmid/problems.hpp"
#include "mmid/ref/linalg.hpp"
#include "mmid/svd.hpp"
#include "test_util.hpp"

using namespace mmid;
using test::max_abs_diff;
using test::random_matrix;

namespace {

// Data matrix of quadratic columns covering both modes.
DataMatrix quadratic_matrix(std::size_t n, std::uint64_t seed) {
    const auto grid = linspace(0.0, 1.0, 100);
    Rng rng(seed);
    DataMatrix h(grid.size(), n);
    for (std::size_t j = 0; j < n; ++j) {
        const int omega = (j % 2 == 0) ? 0 : 1;
        h.set_col(j, quadratic_bimodal_column(rng.uniform(), omega, grid));
    }
    return h;
}

}  // namespace

TEST_CASE("identity factorizes exactly at full rank") {
    const DataMatrix l = DataMatrix::identity(5);
    const IdFactorization f = interpolative_decomposition(l, IdTarget::fixed_rank(5));
    CHECK(f.residual_fro <= 1e-14);
    // C is a permutation of the identity.
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            CHECK((f.coefficients(i, j) == 0.0 || f.coefficients(i, j) == 1.0));
    CHECK(max_abs_diff(reconstruct(l, f), l) < 1e-12);
}

TEST_CASE("quadratic bimodal data has rank 3") {
    const DataMatrix h = quadratic_matrix(100, 21);
    const IdFactorization f = interpolative_decomposition(h, IdTarget::fixed_rank(3));
    CHECK(f.residual_fro <= 1e-8 * frobenius_norm(h));
}

TEST_CASE("residual satisfies the singular-value bound") {
    Rng rng(2);
    const DataMatrix l = random_matrix(10, 10, rng);
    const IdFactorization f = interpolative_decomposition(l, IdTarget::fixed_rank(5));
    const auto sv = singular_values(l);
    const double bound = std::sqrt(5.0 * (10.0 - 5.0) + 1.0) * sv[5];
    CHECK(f.residual_fro <= bound);
}

TEST_CASE("interpolation property at the basis columns") {
    Rng rng(3);
    const DataMatrix l = random_matrix(12, 9, rng);
    const IdFactorization f = interpolative_decomposition(l, IdTarget::fixed_rank(4));
    const DataMatrix approx = reconstruct(l, f);
    for (std::size_t j : f.basis_indices) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < l.rows(); ++i) {
            const double d = l(i, j) - approx(i, j);
            num += d * d;
            den += l(i, j) * l(i, j);
        }
        CHECK(std::sqrt(num) <= 1e-8 * std::sqrt(den));
    }
}

TEST_CASE("residual is non-increasing in rank") {
    Rng rng(4);
    const DataMatrix l = random_matrix(9, 8, rng);
    double prev = frobenius_norm(l);
    for (std::size_t r = 1; r <= 6; ++r) {
        const IdFactorization f = interpolative_decomposition(l, IdTarget::fixed_rank(r));
        CHECK(f.residual_fro <= prev * (1 + 1e-12));
        prev = f.residual_fro;
    }
}

TEST_CASE("tolerance mode picks the smallest satisfying rank") {
    Rng rng(5);
    const DataMatrix l = random_matrix(10, 10, rng);
    const double tol = 0.05;
    const IdFactorization f = interpolative_decomposition(l, IdTarget::frobenius_tol(tol));
    const double budget = tol * frobenius_norm(l);
    CHECK(f.residual_fro <= budget);
    if (f.rank > 1) {
        const IdFactorization smaller =
            interpolative_decomposition(l, IdTarget::fixed_rank(f.rank - 1));
        CHECK(smaller.residual_fro > budget);
    }
    CHECK(f.target_tol == tol);
}

TEST_CASE("stored residual matches a direct recomputation") {
    Rng rng(6);
    const DataMatrix l = random_matrix(8, 11, rng);
    const IdFactorization f = interpolative_decomposition(l, IdTarget::fixed_rank(4));
    const double direct = frobenius_norm_diff(l, reconstruct(l, f));
    CHECK(std::abs(direct - f.residual_fro) <= 1e-10);
}

TEST_CASE("rank-1 matrix reconstructs exactly at r = 1") {
    Rng rng(7);
    DataMatrix l(6, 5);
    std::vector<double> u(6), v(5);
    for (auto &x : u) x = rng.normal();
    for (auto &x : v) x = rng.normal();
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 5; ++j) l(i, j) = u[i] * v[j];
    const IdFactorization f = interpolative_decomposition(l, IdTarget::fixed_rank(1));
    CHECK(f.residual_fro <= 1e-12 * frobenius_norm(l));
    CHECK_THROWS_AS(interpolative_decomposition(l, IdTarget::fixed_rank(3)), RankDeficient);
}

TEST_CASE("bifidelity reconstruction basics") {
    Rng rng(8);
    const DataMatrix h_r = random_matrix(7, 3, rng);
    CHECK(max_abs_diff(bifidelity_reconstruct(h_r, DataMatrix::identity(3)), h_r) == 0.0);
    const DataMatrix zero(7, 3);
    CHECK(frobenius_norm(bifidelity_reconstruct(zero, random_matrix(3, 5, rng))) == 0.0);
    CHECK_THROWS_AS(bifidelity_reconstruct(h_r, random_matrix(4, 5, rng)), DimensionMismatch);
}

TEST_CASE("linear operator between fidelities gives exact recovery") {
    // H has exact rank 3; L = T H with invertible T. The low-fidelity
    // interpolation rule then transfers exactly.
    const DataMatrix h = quadratic_matrix(40, 33);
    const auto grid = linspace(0.0, 1.0, 100);
    const DataMatrix t = gaussian_convolution_operator(grid, 0.05);
    const DataMatrix l = multiply(t, h);

    HighFidelitySampler hf;
    hf.output_length = h.rows();
    hf.sample = [&h](std::size_t j, Rng &) { return h.col(j); };

    const BifidResult res = deterministic_bifid_pipeline(l, hf, IdTarget::fixed_rank(3), Rng(0));
    CHECK(frobenius_norm_diff(res.h_hat, h) <= 1e-8 * frobenius_norm(h));
}

TEST_CASE("pipeline with the low-fidelity model as sampler is the plain reconstruction") {
    Rng rng(9);
    const DataMatrix l = random_matrix(10, 8, rng);
    HighFidelitySampler hf;
    hf.output_length = l.rows();
    hf.sample = [&l](std::size_t j, Rng &) { return l.col(j); };
    const BifidResult res = deterministic_bifid_pipeline(l, hf, IdTarget::fixed_rank(4), Rng(1));
    CHECK(max_abs_diff(res.h_hat, reconstruct(l, res.factorization)) == 0.0);
}

TEST_CASE("pipeline is deterministic") {
    Rng rng(10);
    const DataMatrix l = random_matrix(9, 9, rng);
    HighFidelitySampler hf;
    hf.output_length = 9;
    hf.sample = [&l](std::size_t j, Rng &stream) {
        auto col = l.col(j);
        for (double &v : col) v += 1e-3 * stream.uniform();
        return col;
    };
    const BifidResult a = deterministic_bifid_pipeline(l, hf, IdTarget::fixed_rank(3), Rng(77));
    const BifidResult b = deterministic_bifid_pipeline(l, hf, IdTarget::fixed_rank(3), Rng(77));
    CHECK(a.h_hat == b.h_hat);
    CHECK(a.h_r == b.h_r);
}

TEST_CASE("wrong-length sampler output raises") {
    Rng rng(11);
    const DataMatrix l = random_matrix(6, 6, rng);
    HighFidelitySampler bad;
    bad.output_length = 6;
    bad.sample = [](std::size_t, Rng &) { return std::vector<double>(4, 1.0); };
    CHECK_THROWS_AS(deterministic_bifid_pipeline(l, bad, IdTarget::fixed_rank(2), Rng(0)),
                    SamplerFailure);
}
