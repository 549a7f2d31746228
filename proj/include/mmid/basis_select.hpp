#ifndef MMID_BASIS_SELECT_HPP
#define MMID_BASIS_SELECT_HPP

#include <functional>

#include "mmid/ensemble.hpp"

namespace mmid {

// Rank-r pivoted QR of the vertically stacked ensemble; the first r pivots
// are the basis.
std::vector<std::size_t> basis_select_vertstack(const MatrixEnsemble &ens, std::size_t r);

// Synthetic low-fidelity draw: each column is copied from a uniformly chosen
// ensemble sample, independently per column (columns are independently
// distributed across samples).
DataMatrix bootstrap_sample(const MatrixEnsemble &ens, Rng &rng);

// Sample-average cost of a basis subset: mean squared Frobenius residual of
// the unregularized least-squares fit over the given bootstrap draws.
// Rank-deficient skeletons fall back to the minimum-norm solution.
double saa_cost(std::span<const std::size_t> basis, const std::vector<DataMatrix> &bootstraps);

// Generic annealer over r-subsets of 0..n-1: proposes single-index swaps,
// always accepts improvements, accepts uphill moves with probability
// exp(-delta / T), cools geometrically. Exposed separately so tests can
// instrument the cost function.
struct SubsetAnnealResult {
    std::vector<std::size_t> indices;
    double cost = 0.0;
    std::size_t improving_proposals = 0;
    std::size_t improving_accepted = 0;
};
SubsetAnnealResult anneal_subset(std::size_t n, std::size_t r,
                                 const std::function<double(std::span<const std::size_t>)> &cost,
                                 std::size_t n_iter, double t_initial, double cooling, Rng rng);

// Simulated-annealing basis selection over the SAA objective. Bootstraps are
// drawn once per restart and held fixed; restarts run concurrently on
// substreams derived from (rng, restart index). Returns the best subset over
// all restarts.
std::vector<std::size_t> basis_select_sa(const MatrixEnsemble &ens, std::size_t r,
                                         const SaConfig &cfg, const Rng &rng);

}  // namespace mmid

#endif
