#include "mmid/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>

#include "mmid/ode.hpp"

namespace mmid {

namespace {

constexpr double kPitchforkHorizon = 10.0;
constexpr double kLotkaHorizon = 50.0;
constexpr double kLotkaSigma = 10.0 / 3.0;

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// True when the column is an exact polynomial of degree <= 2 on a uniform
// grid, i.e. its second differences are constant to rounding. Distinguishes
// raw quadratic-model columns from smoothed ones.
bool has_constant_second_differences(std::span<const double> v) {
    if (v.size() < 4) return true;
    double lo = 0.0, hi = 0.0, mag = 0.0;
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
        const double d2 = v[i + 2] - 2.0 * v[i + 1] + v[i];
        if (i == 0) {
            lo = hi = d2;
        } else {
            lo = std::min(lo, d2);
            hi = std::max(hi, d2);
        }
        mag = std::max(mag, std::abs(d2));
    }
    if (mag == 0.0) return true;
    return (hi - lo) <= 1e-6 * mag;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

DataMatrix gaussian_convolution_operator(std::span<const double> grid, double sigma) {
    if (!(sigma > 0.0)) throw InvalidConfig("gaussian_convolution_operator: sigma must be > 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw InvalidConfig("gaussian_convolution_operator: grid must be strictly increasing");

    const std::size_t m = grid.size();
    DataMatrix t(m, m);
    const double denom = 2.0 * sigma * sigma;
    for (std::size_t i = 0; i < m; ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = grid[i] - grid[j];
            t(i, j) = std::exp(-d * d / denom);
            z += t(i, j);
        }
        for (std::size_t j = 0; j < m; ++j) t(i, j) /= z;
    }
    return t;
}

std::vector<double> quadratic_bimodal_column(double xi, int omega, std::span<const double> grid) {
    std::vector<double> v(grid.size());
    const double shift = (omega == 0) ? -xi : xi;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid[i] + shift;
        v[i] = d * d;
    }
    return v;
}

ProblemDataset make_quadratic_dataset(std::size_t n, std::size_t m, std::size_t n_samples,
                                      double sigma, std::uint64_t seed) {
    ProblemDataset ds;
    ds.name = "quadratic";
    ds.grid = linspace(0.0, 1.0, m);
    const DataMatrix t = gaussian_convolution_operator(ds.grid, sigma);

    const Rng root(seed);
    Rng xi_rng = root.derive("xi");
    ds.xi.resize(n);
    for (std::size_t j = 0; j < n; ++j) ds.xi[j] = {xi_rng.uniform()};

    ds.lf_ensemble.samples.reserve(n_samples);
    ds.lf_truth_labels = ClusterLabels(n_samples, n);
    for (std::size_t s = 0; s < n_samples; ++s) {
        DataMatrix raw(m, n);
        Rng omega_rng = root.derive("lf_omega", s);
        for (std::size_t j = 0; j < n; ++j) {
            const int omega = omega_rng.bernoulli(0.5) ? 1 : 0;
            ds.lf_truth_labels.at(s, j) = omega + 1;
            raw.set_col(j, quadratic_bimodal_column(ds.xi[j][0], omega, ds.grid));
        }
        ds.lf_ensemble.samples.push_back(multiply(t, raw));
    }

    auto xi_values = std::make_shared<std::vector<double>>();
    for (const auto &x : ds.xi) xi_values->push_back(x[0]);
    auto grid = std::make_shared<std::vector<double>>(ds.grid);
    ds.hf_sample_labeled = [xi_values, grid](std::size_t j, Rng &rng) {
        const int omega = rng.bernoulli(0.5) ? 1 : 0;
        return SampledColumn{quadratic_bimodal_column((*xi_values)[j], omega, *grid), omega + 1};
    };
    auto labeled = ds.hf_sample_labeled;
    ds.hf_sampler = {m, [labeled](std::size_t j, Rng &rng) { return labeled(j, rng).values; }};

    // Endpoint-gap statistic v(1) - v(0). For a raw column it equals
    // 1 + 2*s*xi with s = +-1; smoothing by T rescales the gap to
    // c*(1 + 2*s*xi) with c = 1 - 2 E_0[x], so each fidelity needs its own
    // threshold. Raw columns are recognized by their constant second
    // differences.
    const std::vector<double> t_row0(t.row(0).begin(), t.row(0).end());
    double e0 = 0.0;
    for (std::size_t j = 0; j < m; ++j) e0 += t_row0[j] * ds.grid[j];
    const double threshold_lf = 1.0 - 2.0 * e0;
    ds.classifier_params = {{"sigma", sigma}, {"threshold_hf", 1.0}, {"threshold_lf", threshold_lf}};
    ds.classifier.num_modes = 2;
    ds.classifier.classify = [threshold_lf](std::span<const double> col) {
        const double gap = col.back() - col.front();
        const double threshold = has_constant_second_differences(col) ? 1.0 : threshold_lf;
        return gap > threshold ? 2 : 1;
    };
    return ds;
}

std::vector<double> pitchfork_column(double xi, int direction, std::span<const double> grid,
                                     bool high_fidelity) {
    OdeProblem p;
    p.dimension = 1;
    p.x0 = {1e-3 * static_cast<double>(direction)};
    p.t0 = grid.front();
    p.t1 = grid.back();
    p.rtol = high_fidelity ? 1e-6 : 1e-2;
    p.atol = 1e-9;
    p.rhs = [xi](double, std::span<const double> x, std::span<double> dxdt) {
        dxdt[0] = xi * x[0] - x[0] * x[0] * x[0];
    };
    const Trajectory tr = high_fidelity ? integrate_rk45(p) : integrate_rk23(p);
    return sample_on_grid(tr, grid).col(0);
}

ProblemDataset make_pitchfork_dataset(std::size_t n, std::size_t n_samples, std::uint64_t seed) {
    ProblemDataset ds;
    ds.name = "pitchfork";
    const std::size_t m = 100;
    ds.grid = linspace(0.0, kPitchforkHorizon, m);

    const Rng root(seed);
    Rng xi_rng = root.derive("xi");
    ds.xi.resize(n);
    for (std::size_t j = 0; j < n; ++j) ds.xi[j] = {xi_rng.uniform(0.0, 5.0)};

    ds.lf_ensemble.samples.reserve(n_samples);
    ds.lf_truth_labels = ClusterLabels(n_samples, n);
    for (std::size_t s = 0; s < n_samples; ++s) {
        DataMatrix sample(m, n);
        Rng sign_rng = root.derive("lf_sign", s);
        std::vector<int> direction(n);
        for (std::size_t j = 0; j < n; ++j) {
            direction[j] = sign_rng.bernoulli(0.5) ? 1 : -1;
            ds.lf_truth_labels.at(s, j) = direction[j] > 0 ? 1 : 2;
        }
        const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t j = 0; j < nn; ++j) {
            const auto col = pitchfork_column(ds.xi[static_cast<std::size_t>(j)][0],
                                              direction[static_cast<std::size_t>(j)], ds.grid,
                                              /*high_fidelity=*/false);
            sample.set_col(static_cast<std::size_t>(j), col);
        }
        ds.lf_ensemble.samples.push_back(std::move(sample));
    }

    auto xi_values = std::make_shared<std::vector<double>>();
    for (const auto &x : ds.xi) xi_values->push_back(x[0]);
    auto grid = std::make_shared<std::vector<double>>(ds.grid);
    ds.hf_sample_labeled = [xi_values, grid](std::size_t j, Rng &rng) {
        const int direction = rng.bernoulli(0.5) ? 1 : -1;
        return SampledColumn{pitchfork_column((*xi_values)[j], direction, *grid, true),
                             direction > 0 ? 1 : 2};
    };
    auto labeled = ds.hf_sample_labeled;
    ds.hf_sampler = {m, [labeled](std::size_t j, Rng &rng) { return labeled(j, rng).values; }};

    ds.classifier_params = {{"threshold", 0.0}};
    ds.classifier.num_modes = 2;
    ds.classifier.classify = [](std::span<const double> col) {
        return col.back() >= 0.0 ? 1 : 2;  // zero maps to mode 1
    };
    return ds;
}

double lotka_volterra_mix_weight(double xi1, double xi2) {
    const double n_coeff = 10.0 / std::sqrt(2.0);
    const double m_offset = 5.0 * std::sqrt(2.0) - 0.5;
    return 1.0 / (1.0 + std::exp(n_coeff * (xi1 + xi2) - m_offset));
}

LotkaVolterraParams lotka_volterra_params(double xi1, double xi2, int branch) {
    if (branch == 1) return {0.5, 5.0, 2.0 + 0.5 * (xi1 + xi2), 1.0};
    return {0.5, 10.0, 0.25 * (xi1 + xi2), 1.0};
}

std::vector<double> lotka_volterra_prey_column(const LotkaVolterraParams &params,
                                               std::span<const double> grid, double rtol) {
    OdeProblem p;
    p.dimension = 2;
    p.x0 = {0.5, 0.5};
    p.t0 = grid.front();
    p.t1 = grid.back();
    p.rtol = rtol;
    p.atol = 1e-9;
    p.rhs = [params](double, std::span<const double> z, std::span<double> dzdt) {
        const double x = z[0], y = z[1];
        dzdt[0] = params.alpha * x * (1.0 - x / params.capacity) - params.beta * x * y;
        dzdt[1] = params.beta * x * y - params.gamma * y;
    };
    return sample_on_grid(integrate_rk45(p), grid).col(0);
}

ProblemDataset make_lotka_volterra_dataset(std::size_t n, std::size_t n_samples,
                                           std::uint64_t seed) {
    ProblemDataset ds;
    ds.name = "lotka";
    const std::size_t m = 100;
    ds.grid = linspace(0.0, kLotkaHorizon, m);
    const DataMatrix t = gaussian_convolution_operator(ds.grid, kLotkaSigma);

    const Rng root(seed);
    Rng xi_rng = root.derive("xi");
    ds.xi.resize(n);
    for (std::size_t j = 0; j < n; ++j) ds.xi[j] = {xi_rng.uniform(), xi_rng.uniform()};

    ds.lf_ensemble.samples.reserve(n_samples);
    ds.lf_truth_labels = ClusterLabels(n_samples, n);
    for (std::size_t s = 0; s < n_samples; ++s) {
        DataMatrix raw(m, n);
        Rng branch_rng = root.derive("lf_branch", s);
        std::vector<int> branch(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double phi = lotka_volterra_mix_weight(ds.xi[j][0], ds.xi[j][1]);
            branch[j] = branch_rng.bernoulli(phi) ? 1 : 2;
            ds.lf_truth_labels.at(s, j) = branch[j];
        }
        const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t j = 0; j < nn; ++j) {
            const std::size_t jj = static_cast<std::size_t>(j);
            const auto params = lotka_volterra_params(ds.xi[jj][0], ds.xi[jj][1], branch[jj]);
            raw.set_col(jj, lotka_volterra_prey_column(params, ds.grid, 1e-3));
        }
        ds.lf_ensemble.samples.push_back(multiply(t, raw));
    }

    auto xi_copy = std::make_shared<std::vector<std::vector<double>>>(ds.xi);
    auto grid = std::make_shared<std::vector<double>>(ds.grid);
    ds.hf_sample_labeled = [xi_copy, grid](std::size_t j, Rng &rng) {
        const auto &x = (*xi_copy)[j];
        const double phi = lotka_volterra_mix_weight(x[0], x[1]);
        const int branch = rng.bernoulli(phi) ? 1 : 2;
        const auto params = lotka_volterra_params(x[0], x[1], branch);
        return SampledColumn{lotka_volterra_prey_column(params, *grid, 1e-3), branch};
    };
    auto labeled = ds.hf_sample_labeled;
    ds.hf_sampler = {m, [labeled](std::size_t j, Rng &rng) { return labeled(j, rng).values; }};

    // Mode 1 (small carrying capacity, strong predation) sits well below
    // mode 2 in time-mean. Calibrate the threshold at the margin midpoint
    // between the closest truth-labeled columns; the midpoint of the branch
    // means would cut into mode 2's spread near xi1 + xi2 = 2.
    double max_low = 0.0, min_high = 0.0;
    bool saw_low = false, saw_high = false;
    for (std::size_t s = 0; s < n_samples; ++s)
        for (std::size_t j = 0; j < n; ++j) {
            const double stat = mean(ds.lf_ensemble.samples[s].col(j));
            if (ds.lf_truth_labels.at(s, j) == 1) {
                max_low = saw_low ? std::max(max_low, stat) : stat;
                saw_low = true;
            } else {
                min_high = saw_high ? std::min(min_high, stat) : stat;
                saw_high = true;
            }
        }
    // analytic fallback when the calibration set misses a branch
    const double threshold = (saw_low && saw_high) ? 0.5 * (max_low + min_high) : 1.25;
    ds.classifier_params = {{"threshold", threshold}};
    ds.classifier.num_modes = 2;
    ds.classifier.classify = [threshold](std::span<const double> col) {
        return mean(col) <= threshold ? 1 : 2;
    };
    return ds;
}

ProblemDataset make_dataset(const std::string &problem, std::size_t n, std::size_t m,
                            std::size_t n_samples, std::uint64_t seed) {
    if (problem == "quadratic") return make_quadratic_dataset(n, m, n_samples, 0.5, seed);
    if (problem == "pitchfork") return make_pitchfork_dataset(n, n_samples, seed);
    if (problem == "lotka") return make_lotka_volterra_dataset(n, n_samples, seed);
    throw InvalidConfig("unknown problem: " + problem);
}

LabeledMatrix materialize_hf(const ProblemDataset &ds, const Rng &rng) {
    const std::size_t n = ds.n_inputs(), m = ds.grid_size();
    LabeledMatrix out{DataMatrix(m, n), std::vector<int>(n)};
    std::exception_ptr failure = nullptr;
    const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < nn; ++j) {
        try {
            const std::size_t jj = static_cast<std::size_t>(j);
            Rng stream = rng.derive("hf", jj);
            const SampledColumn col = ds.hf_sample_labeled(jj, stream);
            if (col.values.size() != m) throw SamplerFailure("wrong-length high-fidelity column");
            out.values.set_col(jj, col.values);
            out.truth_labels[jj] = col.mode;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

MaterializedDataset dataset_to_matrices(const ProblemDataset &ds, const Rng &rng) {
    MaterializedDataset out;
    out.lf = ds.lf_ensemble;
    LabeledMatrix hf = materialize_hf(ds, rng);
    out.hf_sample = std::move(hf.values);
    out.hf_truth_labels = std::move(hf.truth_labels);
    return out;
}

}  // namespace mmid
