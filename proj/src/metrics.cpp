#include "mmid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mmid/svd.hpp"

namespace mmid {

double wasserstein1_flat(const DataMatrix &a, const DataMatrix &b) {
    if (a.size() != b.size())
        throw SizeMismatch("wasserstein1_flat: element counts differ");
    std::vector<double> xs(a.data()), ys(b.data());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += std::abs(xs[i] - ys[i]);
    return acc / static_cast<double>(xs.size());
}

W1Summary summarize(const std::vector<double> &distances) {
    W1Summary s;
    if (distances.empty()) return s;
    std::vector<double> sorted = distances;
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    const std::size_t n = sorted.size();
    s.median = (n % 2) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double acc = 0.0;
    for (double v : sorted) acc += v;
    s.mean = acc / static_cast<double>(n);
    return s;
}

ApproxMethod approx_method_from_string(const std::string &name) {
    if (name == "baseline") return ApproxMethod::baseline;
    if (name == "multimodal") return ApproxMethod::multimodal;
    throw InvalidConfig("unknown method: " + name);
}

std::string to_string(ApproxMethod method) {
    return method == ApproxMethod::baseline ? "baseline" : "multimodal";
}

namespace {

double per_column_w1_mean(const DataMatrix &a, const DataMatrix &b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        std::vector<double> xs = a.col(j), ys = b.col(j);
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        double col = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) col += std::abs(xs[i] - ys[i]);
        acc += col / static_cast<double>(xs.size());
    }
    return acc / static_cast<double>(a.cols());
}

}  // namespace

W1Report w1_benchmark(const ProblemDataset &ds, ApproxMethod method, std::size_t r,
                      std::size_t trials, std::uint64_t seed, const W1BenchOptions &opts) {
    if (trials == 0) throw InvalidConfig("w1_benchmark: trials must be positive");
    ds.lf_ensemble.validate();
    const Rng root(seed);

    // The multimodal basis depends only on the observed ensemble; select it
    // once and share it across trials (the skeleton, the resampling, and the
    // reference realization stay fresh per trial).
    std::vector<std::size_t> basis;
    if (method == ApproxMethod::multimodal) {
        if (opts.basis_method == BasisMethod::sa && r < ds.lf_ensemble.cols()) {
            SaConfig cfg = opts.sa;
            if (cfg.n_iter == 0) cfg = SaConfig::defaults(ds.lf_ensemble.cols());
            basis = basis_select_sa(ds.lf_ensemble, r, cfg, root.derive("basis"));
        } else {
            basis = basis_select_vertstack(ds.lf_ensemble, r);
        }
    }

    W1Report report;
    report.trials = trials;
    report.distances.resize(trials);
    std::vector<double> per_column(opts.per_column ? trials : 0);

    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
        try {
            const Rng trial = root.derive("trial", static_cast<std::uint64_t>(t));
            const LabeledMatrix truth = materialize_hf(ds, trial.derive("hf_realization"));

            DataMatrix prediction;
            if (method == ApproxMethod::baseline) {
                Rng lf_rng = trial.derive("lf_draw");
                const DataMatrix l = bootstrap_sample(ds.lf_ensemble, lf_rng);
                const BifidResult res = deterministic_bifid_pipeline(
                    l, ds.hf_sampler, IdTarget::fixed_rank(r), trial.derive("prediction"));
                prediction = res.h_hat;
            } else {
                MultimodalOptions mo;
                mo.lambda = opts.lambda;
                mo.n_predictions = 1;
                mo.data_scale = opts.data_scale;
                const PredictionEnsemble pred = multimodal_id_sample_with_basis(
                    ds.lf_ensemble, ds.hf_sampler, ds.classifier, basis, mo,
                    trial.derive("prediction"));
                prediction = pred.predictions.front();
            }

            report.distances[static_cast<std::size_t>(t)] =
                wasserstein1_flat(truth.values, prediction);
            if (opts.per_column)
                per_column[static_cast<std::size_t>(t)] =
                    per_column_w1_mean(truth.values, prediction);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    report.summary = summarize(report.distances);
    if (opts.per_column) {
        double acc = 0.0;
        for (double v : per_column) acc += v;
        report.per_column_mean = acc / static_cast<double>(trials);
    }
    return report;
}

namespace {

void check_weights(std::span<const double> weights) {
    if (weights.empty()) throw InvalidWeights("empty mixture weights");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidWeights("mixture weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidWeights("mixture weights must sum to 1");
}

}  // namespace

std::pair<double, double> mismatch_probability_bounds(std::span<const double> weights,
                                                      std::size_t r) {
    check_weights(weights);
    if (r == 0) throw InvalidConfig("mismatch_probability_bounds: r must be >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(weights.begin(), weights.end());
    const double rr = static_cast<double>(r);
    return {1.0 - std::pow(*hi_it, rr), 1.0 - std::pow(*lo_it, rr)};
}

double simulate_mismatch_probability(std::span<const double> weights, std::size_t r,
                                     std::size_t draws, Rng rng) {
    check_weights(weights);
    const auto draw_mode = [&](Rng &g) {
        const double u = g.uniform();
        double acc = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            acc += weights[k];
            if (u < acc) return k;
        }
        return weights.size() - 1;
    };
    std::size_t mismatches = 0;
    for (std::size_t d = 0; d < draws; ++d) {
        bool mismatch = false;
        for (std::size_t i = 0; i < r; ++i)
            if (draw_mode(rng) != draw_mode(rng)) mismatch = true;
        if (mismatch) ++mismatches;
    }
    return static_cast<double>(mismatches) / static_cast<double>(draws);
}

double nested_binomial_variance(double pi, std::size_t n_s, std::size_t s) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw InvalidConfig("nested_binomial_variance: pi in [0,1]");
    if (n_s == 0 || s == 0) throw InvalidConfig("nested_binomial_variance: counts must be positive");
    const double ns = static_cast<double>(n_s), ss = static_cast<double>(s);
    return pi * (1.0 - pi) * (ns + ss - 1.0) / (ns * ss);
}

MomentEstimate nested_binomial_simulate(double pi, std::size_t n_s, std::size_t s,
                                        std::size_t reps, Rng rng) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        std::size_t successes = 0;
        for (std::size_t i = 0; i < n_s; ++i)
            if (rng.bernoulli(pi)) ++successes;
        const double p1 = static_cast<double>(successes) / static_cast<double>(n_s);
        std::size_t hat = 0;
        for (std::size_t i = 0; i < s; ++i)
            if (rng.bernoulli(p1)) ++hat;
        const double pi_hat = static_cast<double>(hat) / static_cast<double>(s);
        sum += pi_hat;
        sum_sq += pi_hat * pi_hat;
    }
    const double n = static_cast<double>(reps);
    MomentEstimate est;
    est.mean = sum / n;
    est.variance = (sum_sq - sum * sum / n) / (n - 1.0);
    return est;
}

BoundsReport verify_linear_operator_exactness(const DataMatrix &t, const DataMatrix &h,
                                              std::size_t r) {
    if (t.cols() != h.rows())
        throw DimensionMismatch("verify_linear_operator_exactness: T and H incompatible");
    const DataMatrix l = multiply(t, h);

    const PivotedQr f = qr_column_pivoted(l, r);
    if (f.rank < r)
        throw RankDeficient("verify_linear_operator_exactness: fewer nonzero pivots than r");
    const std::vector<std::size_t> basis(f.pivots.begin(),
                                         f.pivots.begin() + static_cast<std::ptrdiff_t>(r));

    // A rank-deficient skeleton still gets a (minimum-norm) interpolation
    // rule so the failure mode is reported as an error, not an exception.
    const PrescribedBasisFit fit = prescribed_basis_fit(l, basis);
    const DataMatrix l_r = l.select_cols(basis);
    const DataMatrix c = fit.rank_ok ? fit.coefficients : least_squares_min_norm(l_r, l);
    const DataMatrix h_hat = multiply(h.select_cols(basis), c);

    BoundsReport report;
    report.actual = frobenius_norm_diff(h_hat, h);
    const std::vector<double> skel_sv = singular_values(l_r);
    report.exactness_flag = skel_sv[r - 1] > 1e-10 * skel_sv[0];
    return report;
}

BoundsReport bifidelity_error_bounds(const DataMatrix &t, const DataMatrix &l,
                                     const DataMatrix &l_hat, const DataMatrix &h,
                                     const DataMatrix &h_hat, std::size_t r) {
    const std::vector<double> t_sv = singular_values(t);
    const double t_max = t_sv.front(), t_min = t_sv.back();
    if (t.rows() != t.cols() || !(t_min > 1e-10 * t_max))
        throw SingularOperator("bifidelity_error_bounds: operator is numerically singular");

    const double lf_err = frobenius_norm_diff(l_hat, l);
    BoundsReport report;
    report.lower = lf_err / t_max;
    report.upper = lf_err / t_min;
    const std::vector<double> l_sv = singular_values(l);
    const double sigma_next = (r < l_sv.size()) ? l_sv[r] : 0.0;
    const double n = static_cast<double>(l.cols());
    const double rr = static_cast<double>(r);
    report.refined_upper = std::sqrt(rr * (n - rr) + 1.0) * sigma_next / t_min;
    report.actual = frobenius_norm_diff(h_hat, h);
    report.exactness_flag = report.actual <= 1e-8 * frobenius_norm(h);
    return report;
}

}  // namespace mmid
