#ifndef MMID_MULTIMODAL_HPP
#define MMID_MULTIMODAL_HPP

#include <optional>
#include <string>

#include "mmid/basis_select.hpp"
#include "mmid/ensemble.hpp"
#include "mmid/id.hpp"

namespace mmid {

enum class BasisMethod { sa, vertstack };

BasisMethod basis_method_from_string(const std::string &name);
std::string to_string(BasisMethod method);

// chi_H: one label per skeleton column.
std::vector<int> classify_hf_basis(const DataMatrix &h_r, const ClusterClassifier &clf);

// Labels for every (sample, column) of the ensemble.
ClusterLabels classify_ensemble(const MatrixEnsemble &ens, const ClusterClassifier &clf);

// One synthetic low-fidelity matrix with basis columns drawn only from
// ensemble samples whose mode matches the high-fidelity basis label; other
// columns are drawn uniformly. `chosen[j]` is the sample index used for
// column j. Throws NoMatchingCluster when a basis mode never occurred in the
// ensemble at that column.
struct ResampledLf {
    DataMatrix matrix;
    std::vector<std::size_t> chosen;
};
ResampledLf resample_lf(std::span<const std::size_t> basis, const MatrixEnsemble &ens,
                        const ClusterLabels &lf_labels, std::span<const int> hf_basis_labels,
                        Rng &rng);

struct MultimodalOptions {
    double lambda = 1.0;
    std::size_t n_predictions = 1;  // S
    BasisMethod basis_method = BasisMethod::sa;
    SaConfig sa;
    // Uniform factor applied to the resampled data before the ridge solve so
    // lambda = 1 acts on data of magnitude O(10). <= 0 selects the automatic
    // value 10 / median(|L| nonzero); ignored when lambda = 0.
    double data_scale = 0.0;
};

// Algorithm: select the basis, sample the high-fidelity skeleton once,
// classify its modes, then repeatedly resample the low-fidelity data
// conditioned on those modes and solve for interpolation weights. The S
// prediction samples run concurrently on substreams derived from
// (rng, sample index).
PredictionEnsemble multimodal_id_sample(const MatrixEnsemble &ens, const HighFidelitySampler &hf,
                                        const ClusterClassifier &clf, std::size_t r,
                                        const MultimodalOptions &opts, const Rng &rng);

// Same, with the basis already chosen (benchmarks select once and reuse).
PredictionEnsemble multimodal_id_sample_with_basis(const MatrixEnsemble &ens,
                                                   const HighFidelitySampler &hf,
                                                   const ClusterClassifier &clf,
                                                   std::vector<std::size_t> basis,
                                                   const MultimodalOptions &opts, const Rng &rng);

// Fraction of the S predictions whose column j classifies as mode k. Basis
// columns are excluded: they are deterministic given the sampled skeleton.
double estimate_mixture_probability(const PredictionEnsemble &pred, const ClusterClassifier &clf,
                                    std::size_t column, int mode);

// 10 / median(|entry|) over nonzero ensemble entries; 1 when all zero.
double default_data_scale(const MatrixEnsemble &ens);

}  // namespace mmid

#endif
