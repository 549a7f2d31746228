#include "mmid/multimodal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mmid/least_squares.hpp"
#include "mmid/qr.hpp"

namespace mmid {

int ClusterClassifier::label_of(std::span<const double> column) const {
    if (!classify) throw ClassifierFailure("classifier has no callback");
    int label;
    try {
        label = classify(column);
    } catch (const std::exception &e) {
        throw ClassifierFailure(std::string("classifier rejected a column: ") + e.what());
    }
    if (label < 1 || label > num_modes)
        throw ClassifierFailure("classifier produced label outside 1..K");
    return label;
}

bool PredictionEnsemble::is_basis_column(std::size_t j) const {
    return std::find(basis_indices.begin(), basis_indices.end(), j) != basis_indices.end();
}

BasisMethod basis_method_from_string(const std::string &name) {
    if (name == "sa") return BasisMethod::sa;
    if (name == "vertstack") return BasisMethod::vertstack;
    throw InvalidConfig("unknown basis method: " + name);
}

std::string to_string(BasisMethod method) {
    return method == BasisMethod::sa ? "sa" : "vertstack";
}

std::vector<int> classify_hf_basis(const DataMatrix &h_r, const ClusterClassifier &clf) {
    std::vector<int> labels(h_r.cols());
    for (std::size_t k = 0; k < h_r.cols(); ++k) {
        const std::vector<double> col = h_r.col(k);
        labels[k] = clf.label_of(col);
    }
    return labels;
}

ClusterLabels classify_ensemble(const MatrixEnsemble &ens, const ClusterClassifier &clf) {
    ens.validate();
    ClusterLabels labels(ens.count(), ens.cols());
    for (std::size_t s = 0; s < ens.count(); ++s)
        for (std::size_t j = 0; j < ens.cols(); ++j) {
            const std::vector<double> col = ens.samples[s].col(j);
            labels.at(s, j) = clf.label_of(col);
        }
    return labels;
}

ResampledLf resample_lf(std::span<const std::size_t> basis, const MatrixEnsemble &ens,
                        const ClusterLabels &lf_labels, std::span<const int> hf_basis_labels,
                        Rng &rng) {
    ens.validate();
    const std::size_t m = ens.rows(), n = ens.cols(), ns = ens.count();
    if (lf_labels.rows() != ns || lf_labels.cols() != n)
        throw DimensionMismatch("resample_lf: label shape does not match ensemble");
    if (hf_basis_labels.size() != basis.size())
        throw DimensionMismatch("resample_lf: one high-fidelity label per basis column required");

    std::vector<int> basis_mode(n, 0);  // 0 = not a basis column
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (basis[k] >= n) throw DimensionMismatch("resample_lf: basis index out of range");
        basis_mode[basis[k]] = hf_basis_labels[k];
    }

    ResampledLf out{DataMatrix(m, n), std::vector<std::size_t>(n)};
    std::vector<std::size_t> match;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t pick;
        if (basis_mode[j] != 0) {
            match.clear();
            for (std::size_t s = 0; s < ns; ++s)
                if (lf_labels.at(s, j) == basis_mode[j]) match.push_back(s);
            if (match.empty()) throw NoMatchingCluster(j);
            pick = match[rng.uniform_index(match.size())];
        } else {
            pick = static_cast<std::size_t>(rng.uniform_index(ns));
        }
        out.chosen[j] = pick;
        for (std::size_t i = 0; i < m; ++i) out.matrix(i, j) = ens.samples[pick](i, j);
    }
    return out;
}

double default_data_scale(const MatrixEnsemble &ens) {
    std::vector<double> mags;
    for (const auto &s : ens.samples)
        for (double v : s.data())
            if (v != 0.0) mags.push_back(std::abs(v));
    if (mags.empty()) return 1.0;
    const std::size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
    return 10.0 / mags[mid];
}

PredictionEnsemble multimodal_id_sample_with_basis(const MatrixEnsemble &ens,
                                                   const HighFidelitySampler &hf,
                                                   const ClusterClassifier &clf,
                                                   std::vector<std::size_t> basis,
                                                   const MultimodalOptions &opts, const Rng &rng) {
    ens.validate();
    if (opts.n_predictions == 0) throw InvalidConfig("multimodal_id_sample: S must be positive");
    if (opts.lambda < 0.0) throw InvalidConfig("multimodal_id_sample: lambda must be >= 0");

    PredictionEnsemble out;
    out.basis_indices = std::move(basis);

    // The r high-fidelity runs happen exactly once.
    const DataMatrix h_r = sample_high_fidelity_basis(hf, out.basis_indices, rng.derive("hf_basis"));
    out.hf_basis_labels = classify_hf_basis(h_r, clf);
    const ClusterLabels lf_labels = classify_ensemble(ens, clf);

    // Scaling matters only to the ridge penalty; the lambda = 0 solve is left
    // untouched so it degenerates to the deterministic pipeline exactly.
    const double factor =
        (opts.lambda > 0.0) ? (opts.data_scale > 0.0 ? opts.data_scale : default_data_scale(ens))
                            : 1.0;

    const std::size_t s_total = opts.n_predictions;
    out.predictions.resize(s_total);
    out.resample_choices.resize(s_total);

    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(s_total); ++i) {
        try {
            Rng stream = rng.derive("resample", static_cast<std::uint64_t>(i));
            ResampledLf draw =
                resample_lf(out.basis_indices, ens, lf_labels, out.hf_basis_labels, stream);

            DataMatrix weights;
            if (opts.lambda > 0.0) {
                DataMatrix scaled = scale(draw.matrix, factor);
                weights = ridge_least_squares(scaled.select_cols(out.basis_indices), scaled,
                                              opts.lambda);
            } else {
                const PrescribedBasisFit fit = prescribed_basis_fit(draw.matrix, out.basis_indices);
                if (!fit.rank_ok)
                    throw RankDeficient("multimodal_id_sample: resampled basis rank deficient");
                weights = fit.coefficients;
            }
            out.predictions[static_cast<std::size_t>(i)] = bifidelity_reconstruct(h_r, weights);
            out.resample_choices[static_cast<std::size_t>(i)] = std::move(draw.chosen);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

PredictionEnsemble multimodal_id_sample(const MatrixEnsemble &ens, const HighFidelitySampler &hf,
                                        const ClusterClassifier &clf, std::size_t r,
                                        const MultimodalOptions &opts, const Rng &rng) {
    ens.validate();
    std::vector<std::size_t> basis;
    if (opts.basis_method == BasisMethod::sa && r < ens.cols()) {
        SaConfig cfg = opts.sa;
        if (cfg.n_iter == 0) cfg = SaConfig::defaults(ens.cols());
        basis = basis_select_sa(ens, r, cfg, rng.derive("basis"));
    } else {
        basis = basis_select_vertstack(ens, r);
    }
    return multimodal_id_sample_with_basis(ens, hf, clf, std::move(basis), opts, rng);
}

double estimate_mixture_probability(const PredictionEnsemble &pred, const ClusterClassifier &clf,
                                    std::size_t column, int mode) {
    if (pred.predictions.empty()) throw InvalidConfig("estimate_mixture_probability: empty ensemble");
    if (column >= pred.predictions.front().cols())
        throw DimensionMismatch("estimate_mixture_probability: column out of range");
    if (pred.is_basis_column(column))
        throw BasisColumnRequested("column " + std::to_string(column) +
                                   " is a basis column; its mode is fixed by the skeleton");

    std::size_t hits = 0;
    for (const DataMatrix &p : pred.predictions) {
        const std::vector<double> col = p.col(column);
        if (clf.label_of(col) == mode) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pred.count());
}

}  // namespace mmid
