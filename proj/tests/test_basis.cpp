#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mmid/basis_select.hpp"
#include "mmid/id.hpp"
#include "mmid/ref/linalg.hpp"
#include "test_util.hpp"

using namespace mmid;
using test::random_matrix;

namespace {

MatrixEnsemble single(const DataMatrix &m) { return MatrixEnsemble{{m}}; }

// 10x10 matrix whose columns are combinations of columns 2 and 7 plus noise.
DataMatrix planted_matrix(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> b2(10), b7(10);
    for (auto &v : b2) v = rng.normal();
    for (auto &v : b7) v = rng.normal();
    DataMatrix out(10, 10);
    for (std::size_t j = 0; j < 10; ++j) {
        double alpha = rng.normal(), beta = rng.normal();
        if (j == 2) alpha = 1.0, beta = 0.0;
        if (j == 7) alpha = 0.0, beta = 1.0;
        for (std::size_t i = 0; i < 10; ++i)
            out(i, j) = alpha * b2[i] + beta * b7[i] + 1e-6 * rng.normal();
    }
    return out;
}

double exhaustive_best_cost(const std::vector<DataMatrix> &bootstraps, std::size_t n,
                            std::size_t r) {
    REQUIRE(r == 2);
    double best = 1e300;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::vector<std::size_t> basis{i, j};
            best = std::min(best, saa_cost(basis, bootstraps));
        }
    return best;
}

}  // namespace

TEST_CASE("vertical stacking with one sample reduces to the deterministic basis") {
    Rng rng(1);
    const DataMatrix l = random_matrix(8, 10, rng);
    const auto basis = basis_select_vertstack(single(l), 4);
    const IdFactorization f = interpolative_decomposition(l, IdTarget::fixed_rank(4));
    CHECK(basis == f.basis_indices);
}

TEST_CASE("duplicated samples do not change the selected basis") {
    Rng rng(2);
    const DataMatrix l = random_matrix(8, 10, rng);
    MatrixEnsemble ens{{l, l, l}};
    CHECK(basis_select_vertstack(ens, 4) == basis_select_vertstack(single(l), 4));
}

TEST_CASE("bootstrap sampling") {
    Rng rng(3);
    const DataMatrix l = random_matrix(5, 6, rng);
    Rng draw(10);
    CHECK(bootstrap_sample(single(l), draw) == l);

    // two constant samples: per-column frequency of ones is one half
    MatrixEnsemble pair{{DataMatrix(4, 5, 0.0), DataMatrix(4, 5, 1.0)}};
    std::vector<std::size_t> ones(5, 0);
    Rng mc(4);
    const std::size_t draws = 10000;
    for (std::size_t d = 0; d < draws; ++d) {
        const DataMatrix b = bootstrap_sample(pair, mc);
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK((b(0, j) == 0.0 || b(0, j) == 1.0));
            if (b(0, j) == 1.0) ++ones[j];
        }
    }
    for (std::size_t j = 0; j < 5; ++j)
        CHECK(static_cast<double>(ones[j]) / draws == doctest::Approx(0.5).epsilon(0.04));

    Rng s1(7), s2(7);
    CHECK(bootstrap_sample(pair, s1) == bootstrap_sample(pair, s2));
}

TEST_CASE("saa cost on exactly representable data") {
    Rng rng(5);
    // rank-2 matrix spanned by columns 0 and 3
    DataMatrix l(6, 6);
    std::vector<double> a(6), b(6);
    for (auto &v : a) v = rng.normal();
    for (auto &v : b) v = rng.normal();
    for (std::size_t j = 0; j < 6; ++j) {
        const double ca = (j == 0) ? 1.0 : ((j == 3) ? 0.0 : rng.normal());
        const double cb = (j == 3) ? 1.0 : ((j == 0) ? 0.0 : rng.normal());
        for (std::size_t i = 0; i < 6; ++i) l(i, j) = ca * a[i] + cb * b[i];
    }
    const std::vector<DataMatrix> boots{l, l, l};
    const std::vector<std::size_t> span{0, 3};
    CHECK(saa_cost(span, boots) <= 1e-12 * std::pow(frobenius_norm(l), 2));

    std::vector<std::size_t> all(6);
    for (std::size_t j = 0; j < 6; ++j) all[j] = j;
    CHECK(saa_cost(all, boots) == 0.0);
}

TEST_CASE("saa cost matches the normal-equations oracle") {
    Rng rng(6);
    std::vector<DataMatrix> boots;
    for (int i = 0; i < 3; ++i) boots.push_back(random_matrix(6, 6, rng));
    const std::vector<std::size_t> basis{1, 4};
    double expected = 0.0;
    for (const auto &m : boots) expected += ref::subset_residual_sq(m, basis);
    expected /= 3.0;
    CHECK(saa_cost(basis, boots) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("annealer always accepts improving proposals") {
    Rng cost_rng(8);
    // random cost table over subsets: hash the subset to a pseudo-random value
    const auto cost = [](std::span<const std::size_t> basis) {
        std::uint64_t h = 1469598103934665603ull;
        std::vector<std::size_t> sorted(basis.begin(), basis.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t v : sorted) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<double>(h % 10007) / 10007.0;
    };
    const SubsetAnnealResult res = anneal_subset(20, 5, cost, 500, 1.0, 0.99, Rng(9));
    CHECK(res.improving_proposals > 0);
    CHECK(res.improving_accepted == res.improving_proposals);
    CHECK(res.cost <= 1.0);
}

TEST_CASE("simulated annealing finds the planted pair") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DataMatrix l = planted_matrix(seed);
        const MatrixEnsemble ens = single(l);
        SaConfig cfg = SaConfig::defaults(10);
        const auto basis = basis_select_sa(ens, 2, cfg, Rng(seed * 31 + 1));

        const std::vector<DataMatrix> eval{l};
        const double sa_cost_val = saa_cost(basis, eval);
        const double best = exhaustive_best_cost(eval, 10, 2);
        CHECK(sa_cost_val <= best + 1e-3);
    }
}

TEST_CASE("rank-1 ensemble: any nonzero column is optimal") {
    Rng rng(11);
    DataMatrix l(6, 8);
    std::vector<double> u(6), w(8);
    for (auto &v : u) v = rng.normal();
    for (auto &v : w) v = rng.normal();
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 8; ++j) l(i, j) = u[i] * w[j];
    SaConfig cfg = SaConfig::defaults(8);
    const auto basis = basis_select_sa(single(l), 1, cfg, Rng(12));
    const std::vector<DataMatrix> eval{l};
    CHECK(saa_cost(basis, eval) <= 1e-12);
}

TEST_CASE("basis selection is deterministic for a fixed seed") {
    Rng rng(13);
    MatrixEnsemble ens;
    for (int i = 0; i < 4; ++i) ens.samples.push_back(random_matrix(7, 9, rng));
    SaConfig cfg = SaConfig::defaults(9);
    const auto a = basis_select_sa(ens, 3, cfg, Rng(14));
    const auto b = basis_select_sa(ens, 3, cfg, Rng(14));
    CHECK(a == b);

    CHECK_THROWS_AS(basis_select_sa(ens, 9, cfg, Rng(1)), InvalidConfig);
    SaConfig bad = cfg;
    bad.cooling = 1.5;
    CHECK_THROWS_AS(basis_select_sa(ens, 3, bad, Rng(1)), InvalidConfig);
}
