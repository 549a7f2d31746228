#ifndef MMID_ENSEMBLE_HPP
#define MMID_ENSEMBLE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mmid/matrix.hpp"
#include "mmid/rng.hpp"

namespace mmid {

// N_S independent samples of the low-fidelity data matrix; column j of every
// sample corresponds to the same parametric input xi_j.
struct MatrixEnsemble {
    std::vector<DataMatrix> samples;

    std::size_t count() const { return samples.size(); }
    std::size_t rows() const { return samples.front().rows(); }
    std::size_t cols() const { return samples.front().cols(); }

    void validate() const {
        if (samples.empty()) throw InvalidConfig("ensemble needs at least one sample");
        for (const auto &s : samples)
            if (s.rows() != rows() || s.cols() != cols())
                throw DimensionMismatch("ensemble samples must share dimensions");
    }
};

// Mode labels in 1..K. Shape is n_samples x n_cols for low-fidelity data or
// 1 x r for high-fidelity basis labels.
class ClusterLabels {
  public:
    ClusterLabels() = default;
    ClusterLabels(std::size_t rows, std::size_t cols, int fill = 1)
        : rows_(rows), cols_(cols), labels_(rows * cols, fill) {}

    static ClusterLabels list(std::vector<int> values) {
        ClusterLabels out;
        out.rows_ = 1;
        out.cols_ = values.size();
        out.labels_ = std::move(values);
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return labels_.size(); }

    int &at(std::size_t i, std::size_t j) { return labels_[i * cols_ + j]; }
    int at(std::size_t i, std::size_t j) const { return labels_[i * cols_ + j]; }
    int operator[](std::size_t k) const { return labels_[k]; }

    const std::vector<int> &values() const { return labels_; }

    void require_in_range(int num_modes) const {
        for (int v : labels_)
            if (v < 1 || v > num_modes)
                throw InvalidConfig("cluster label outside 1..K");
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<int> labels_;
};

// Maps a column vector to a mode label in 1..K. Must be deterministic for a
// fixed column. The shipped problems use a scalar statistic of the column
// against a threshold.
struct ClusterClassifier {
    int num_modes = 1;
    std::function<int(std::span<const double>)> classify;

    int label_of(std::span<const double> column) const;
};

// Simulated annealing controls for stochastic basis selection. t_initial = 0
// selects the automatic schedule (a tenth of the initial cost per restart).
struct SaConfig {
    std::size_t n_iter = 0;
    std::size_t n_restart = 5;
    std::size_t n_bootstrap = 8;
    double t_initial = 0.0;
    double cooling = 0.0;
    std::uint64_t seed = 0;

    // n_iter scales with the column count; cooling reaches 1e-3 of the
    // initial temperature by the final iteration.
    static SaConfig defaults(std::size_t n_cols);

    void validate() const;
};

// S sampled approximations of the high-fidelity data matrix, together with
// the shared basis bookkeeping. resample_choices(i, j) records which ensemble
// sample supplied column j of prediction i.
struct PredictionEnsemble {
    std::vector<DataMatrix> predictions;
    std::vector<std::size_t> basis_indices;
    std::vector<int> hf_basis_labels;
    std::vector<std::vector<std::size_t>> resample_choices;

    std::size_t count() const { return predictions.size(); }
    bool is_basis_column(std::size_t j) const;
};

}  // namespace mmid

#endif
