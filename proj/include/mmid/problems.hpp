#ifndef MMID_PROBLEMS_HPP
#define MMID_PROBLEMS_HPP

#include <map>
#include <string>

#include "mmid/ensemble.hpp"
#include "mmid/id.hpp"

namespace mmid {

// Row-stochastic Gaussian smoothing operator on a 1-D grid:
// T_ij = exp(-(x_i - x_j)^2 / (2 sigma^2)) / Z_i with unit row sums.
DataMatrix gaussian_convolution_operator(std::span<const double> grid, double sigma);

std::vector<double> linspace(double lo, double hi, std::size_t count);

struct SampledColumn {
    std::vector<double> values;
    int mode;  // ground-truth label in 1..K
};

// Paired bi-fidelity problem: a low-fidelity ensemble plus a sampler that
// draws fresh high-fidelity realizations. Ground-truth labels exist for test
// oracles only; the pipeline sees just the classifier.
struct ProblemDataset {
    std::string name;
    MatrixEnsemble lf_ensemble;
    ClusterLabels lf_truth_labels;  // N_S x N
    HighFidelitySampler hf_sampler;
    std::function<SampledColumn(std::size_t j, Rng &rng)> hf_sample_labeled;
    std::vector<std::vector<double>> xi;  // N inputs of dimension d
    std::vector<double> grid;             // M evaluation points
    ClusterClassifier classifier;
    std::map<std::string, double> classifier_params;

    std::size_t n_inputs() const { return xi.size(); }
    std::size_t grid_size() const { return grid.size(); }
};

// Mode k = (x - xi)^2, mode not-k = (x + xi)^2; omega in {0, 1}.
std::vector<double> quadratic_bimodal_column(double xi, int omega, std::span<const double> grid);

// Discrete bimodal distribution with quadratic dependence on a scalar input;
// low fidelity applies the Gaussian smoothing operator to independently
// re-drawn columns.
ProblemDataset make_quadratic_dataset(std::size_t n = 100, std::size_t m = 100,
                                      std::size_t n_samples = 10, double sigma = 0.5,
                                      std::uint64_t seed = 0);

// Pitchfork bifurcation dx/dt = xi*x - x^3 from x(0) = +-1e-3; the branch
// sign is the mode. High fidelity RK5(4) at rtol 1e-6, low fidelity RK3(2)
// at rtol 1e-2, both sampled on a 100-point grid over [0, 10].
std::vector<double> pitchfork_column(double xi, int direction, std::span<const double> grid,
                                     bool high_fidelity);
ProblemDataset make_pitchfork_dataset(std::size_t n = 100, std::size_t n_samples = 10,
                                      std::uint64_t seed = 0);

// Stochastic Lotka-Volterra predator-prey model; the four ODE parameters
// follow a two-component mixture selected by a sigmoid weight in the input
// plane. The prey trajectory on a 100-point grid over [0, 50] is the QOI.
struct LotkaVolterraParams {
    double alpha, capacity, beta, gamma;
};
LotkaVolterraParams lotka_volterra_params(double xi1, double xi2, int branch);
double lotka_volterra_mix_weight(double xi1, double xi2);
std::vector<double> lotka_volterra_prey_column(const LotkaVolterraParams &params,
                                               std::span<const double> grid, double rtol);
ProblemDataset make_lotka_volterra_dataset(std::size_t n = 100, std::size_t n_samples = 10,
                                           std::uint64_t seed = 0);

ProblemDataset make_dataset(const std::string &problem, std::size_t n, std::size_t m,
                            std::size_t n_samples, std::uint64_t seed);

// One full high-fidelity realization (evaluation only; the pipelines query
// just the basis columns).
struct LabeledMatrix {
    DataMatrix values;
    std::vector<int> truth_labels;
};
LabeledMatrix materialize_hf(const ProblemDataset &ds, const Rng &rng);

struct MaterializedDataset {
    MatrixEnsemble lf;
    DataMatrix hf_sample;
    std::vector<int> hf_truth_labels;
};
MaterializedDataset dataset_to_matrices(const ProblemDataset &ds, const Rng &rng);

}  // namespace mmid

#endif
