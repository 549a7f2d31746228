#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmid/problems.hpp"
#include "mmid/svd.hpp"
#include "test_util.hpp"

using namespace mmid;
using test::max_abs_diff;

TEST_CASE("convolution operator is row-stochastic") {
    const auto grid = linspace(0.0, 1.0, 60);
    const DataMatrix t = gaussian_convolution_operator(grid, 0.5);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < t.cols(); ++j) sum += t(i, j);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }

    // constant vectors are fixed points
    DataMatrix ones(60, 1, 1.0);
    CHECK(max_abs_diff(multiply(t, ones), ones) <= 1e-12);

    // vanishing width approaches the identity
    const double spacing = grid[1] - grid[0];
    const DataMatrix tiny = gaussian_convolution_operator(grid, 1e-8 * spacing);
    CHECK(max_abs_diff(tiny, DataMatrix::identity(60)) <= 1e-12);

    CHECK_THROWS_AS(gaussian_convolution_operator(grid, 0.0), InvalidConfig);
}

TEST_CASE("quadratic columns evaluate the two parabolas") {
    const auto grid = linspace(0.0, 1.0, 100);
    const auto plus = quadratic_bimodal_column(1.0, 1, grid);
    CHECK(plus[0] == doctest::Approx(1.0).epsilon(1e-14));  // (0 + 1)^2
    const auto m0 = quadratic_bimodal_column(0.0, 0, grid);
    const auto m1 = quadratic_bimodal_column(0.0, 1, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(m0[i] == m1[i]);
}

TEST_CASE("quadratic data matrix has numerical rank 3") {
    const auto grid = linspace(0.0, 1.0, 100);
    Rng rng(77);
    DataMatrix h(100, 100);
    for (std::size_t j = 0; j < 100; ++j)
        h.set_col(j, quadratic_bimodal_column(rng.uniform(), j % 2 ? 1 : 0, grid));
    const auto sv = singular_values(h);
    CHECK(sv[3] <= 1e-10 * sv[0]);
    CHECK(sv[2] > 1e-8 * sv[0]);
}

TEST_CASE("quadratic dataset: frequencies, classifier, operator identity") {
    std::size_t mode0 = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ProblemDataset ds = make_quadratic_dataset(100, 100, 10, 0.5, seed);
        for (std::size_t s = 0; s < 10; ++s)
            for (std::size_t j = 0; j < 100; ++j) {
                ++total;
                if (ds.lf_truth_labels.at(s, j) == 1) ++mode0;
            }
    }
    const double freq = static_cast<double>(mode0) / static_cast<double>(total);
    CHECK(freq == doctest::Approx(0.5).epsilon(0.04));

    // classifier agrees with ground truth away from xi = 0
    const ProblemDataset ds = make_quadratic_dataset(100, 100, 10, 0.5, 123);
    for (std::size_t s = 0; s < 10; ++s)
        for (std::size_t j = 0; j < 100; ++j) {
            if (ds.xi[j][0] <= 0.05) continue;
            const auto col = ds.lf_ensemble.samples[s].col(j);
            CHECK(ds.classifier.label_of(col) == ds.lf_truth_labels.at(s, j));
        }
    Rng hf_rng(5);
    for (std::size_t j = 0; j < 100; ++j) {
        if (ds.xi[j][0] <= 0.05) continue;
        const SampledColumn col = ds.hf_sample_labeled(j, hf_rng);
        CHECK(ds.classifier.label_of(col.values) == col.mode);
    }

    // forcing matched modes reproduces T * (high-fidelity column)
    const DataMatrix t = gaussian_convolution_operator(ds.grid, 0.5);
    DataMatrix hf_col(100, 1), lf_expected(100, 1);
    hf_col.set_col(0, quadratic_bimodal_column(ds.xi[3][0], 0, ds.grid));
    lf_expected = multiply(t, hf_col);
    DataMatrix raw(100, 1);
    raw.set_col(0, quadratic_bimodal_column(ds.xi[3][0], 0, ds.grid));
    CHECK(max_abs_diff(multiply(t, raw), lf_expected) == 0.0);
}

TEST_CASE("pitchfork dataset branches and degenerate parameter") {
    const auto grid = linspace(0.0, 10.0, 100);

    const auto still = pitchfork_column(0.0, 1, grid, true);
    for (double v : still) CHECK(std::abs(v) <= 1e-3 + 1e-9);

    const auto up = pitchfork_column(4.0, 1, grid, true);
    CHECK(std::abs(up.back() - 2.0) <= 1e-3);

    std::size_t plus = 0, total = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const ProblemDataset ds = make_pitchfork_dataset(50, 2, seed);
        const LabeledMatrix hf = materialize_hf(ds, Rng(seed ^ 0xabcd));
        for (std::size_t j = 0; j < 50; ++j) {
            ++total;
            if (hf.truth_labels[j] == 1) ++plus;
            CHECK(ds.classifier.label_of(hf.values.col(j)) == hf.truth_labels[j]);
        }
    }
    CHECK(static_cast<double>(plus) / static_cast<double>(total) ==
          doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("lotka-volterra mixture weight and degenerate logistic limit") {
    CHECK(lotka_volterra_mix_weight(0.0, 0.0) >= 0.99);
    CHECK(lotka_volterra_mix_weight(1.0, 1.0) <= 0.01);
    // transition along xi1 + xi2 near 0.93
    CHECK(lotka_volterra_mix_weight(0.46, 0.46) > 0.4);
    CHECK(lotka_volterra_mix_weight(0.47, 0.47) < 0.6);

    // beta = gamma = 0 decouples the prey into logistic growth
    const auto grid = linspace(0.0, 50.0, 100);
    const LotkaVolterraParams p{0.5, 10.0, 0.0, 0.0};
    const auto col = lotka_volterra_prey_column(p, grid, 1e-6);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expected =
            p.capacity / (1.0 + (p.capacity / 0.5 - 1.0) * std::exp(-p.alpha * grid[i]));
        CHECK(std::abs(col[i] - expected) <= 1e-4 * expected);
    }
}

TEST_CASE("lotka-volterra classifier is exact on its own columns") {
    const ProblemDataset ds = make_lotka_volterra_dataset(30, 3, 9);
    for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t j = 0; j < 30; ++j) {
            const auto col = ds.lf_ensemble.samples[s].col(j);
            CHECK(ds.classifier.label_of(col) == ds.lf_truth_labels.at(s, j));
        }
    const LabeledMatrix hf = materialize_hf(ds, Rng(4321));
    for (std::size_t j = 0; j < 30; ++j)
        CHECK(ds.classifier.label_of(hf.values.col(j)) == hf.truth_labels[j]);
}

TEST_CASE("dataset materialization shapes and determinism") {
    const ProblemDataset ds = make_quadratic_dataset(40, 64, 3, 0.5, 8);
    const MaterializedDataset a = dataset_to_matrices(ds, Rng(99));
    CHECK(a.hf_sample.rows() == 64);
    CHECK(a.hf_sample.cols() == 40);
    CHECK(a.lf.count() == 3);

    const MaterializedDataset b = dataset_to_matrices(ds, Rng(99));
    CHECK(a.hf_sample == b.hf_sample);
    CHECK(a.hf_truth_labels == b.hf_truth_labels);

    // a different stream changes only the mode occupancy pattern
    const MaterializedDataset c = dataset_to_matrices(ds, Rng(100));
    bool any_diff = false;
    for (std::size_t j = 0; j < 40; ++j)
        if (a.hf_truth_labels[j] != c.hf_truth_labels[j]) any_diff = true;
    CHECK(any_diff);
    for (std::size_t j = 0; j < 40; ++j) {
        if (a.hf_truth_labels[j] != c.hf_truth_labels[j]) continue;
        for (std::size_t i = 0; i < 64; ++i) CHECK(a.hf_sample(i, j) == c.hf_sample(i, j));
    }
}
