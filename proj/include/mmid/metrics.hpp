#ifndef MMID_METRICS_HPP
#define MMID_METRICS_HPP

#include <optional>
#include <utility>

#include "mmid/multimodal.hpp"
#include "mmid/problems.hpp"

namespace mmid {

// Exact 1-D Wasserstein-1 distance between the flattened entries of two
// matrices of equal element count: mean absolute difference of paired order
// statistics.
double wasserstein1_flat(const DataMatrix &a, const DataMatrix &b);

struct W1Summary {
    double mean = 0.0, median = 0.0, min = 0.0, max = 0.0;
};
struct W1Report {
    std::vector<double> distances;
    std::size_t trials = 0;
    W1Summary summary;
    std::optional<double> per_column_mean;  // mean per-column W1, when requested
};
W1Summary summarize(const std::vector<double> &distances);

enum class ApproxMethod { baseline, multimodal };
ApproxMethod approx_method_from_string(const std::string &name);
std::string to_string(ApproxMethod method);

struct W1BenchOptions {
    double lambda = 1.0;
    BasisMethod basis_method = BasisMethod::sa;
    SaConfig sa;            // n_iter = 0 selects defaults for the column count
    double data_scale = 0.0;
    bool per_column = false;
};

// Per trial: a fresh high-fidelity realization H and a fresh method
// prediction. Baseline re-runs the deterministic pipeline on a fresh
// bootstrap of the ensemble; multimodal draws one member of a prediction
// ensemble whose skeleton is re-sampled every trial. The multimodal basis is
// a function of the (fixed) ensemble, so it is selected once per call.
// Identical seeds pair the H draws across methods.
W1Report w1_benchmark(const ProblemDataset &ds, ApproxMethod method, std::size_t r,
                      std::size_t trials, std::uint64_t seed, const W1BenchOptions &opts = {});

// (1 - (max_k pi_k)^r, 1 - (min_k pi_k)^r): bounds on the probability that
// any of r independently sampled basis modes disagree across fidelities.
std::pair<double, double> mismatch_probability_bounds(std::span<const double> weights,
                                                      std::size_t r);

// Monte Carlo mismatch frequency for independent low/high-fidelity mode
// draws at constant weights.
double simulate_mismatch_probability(std::span<const double> weights, std::size_t r,
                                     std::size_t draws, Rng rng);

// pi (1 - pi) (N_S + S - 1) / (N_S S).
double nested_binomial_variance(double pi, std::size_t n_s, std::size_t s);

struct MomentEstimate {
    double mean = 0.0, variance = 0.0;
};
// Simulates the nested binomial estimator: p1 ~ Bin(N_S, pi)/N_S, then
// pi_hat ~ Bin(S, p1)/S.
MomentEstimate nested_binomial_simulate(double pi, std::size_t n_s, std::size_t s,
                                        std::size_t reps, Rng rng);

struct BoundsReport {
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<double> refined_upper;
    double actual = 0.0;
    bool exactness_flag = false;
};

// Forms L = T H, runs the deterministic bi-fidelity pipeline at rank r with
// the columns of H as the high-fidelity model, and reports the
// reconstruction error together with the full-column-rank test on the
// low-fidelity skeleton.
BoundsReport verify_linear_operator_exactness(const DataMatrix &t, const DataMatrix &h,
                                              std::size_t r);

// Error sandwich for an invertible operator relating the fidelities:
//   ||L_hat - L||_F / ||T||_2 <= ||H_hat - H||_F <= ||T^{-1}||_2 ||L_hat - L||_F,
// with the refined upper bound using sqrt(r(N-r)+1) sigma_{r+1}(L).
BoundsReport bifidelity_error_bounds(const DataMatrix &t, const DataMatrix &l,
                                     const DataMatrix &l_hat, const DataMatrix &h,
                                     const DataMatrix &h_hat, std::size_t r);

}  // namespace mmid

#endif
