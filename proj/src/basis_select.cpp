#include "mmid/basis_select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mmid/qr.hpp"
#include "mmid/svd.hpp"

namespace mmid {

SaConfig SaConfig::defaults(std::size_t n_cols) {
    SaConfig cfg;
    cfg.n_iter = 20 * n_cols;
    cfg.n_restart = 5;
    cfg.n_bootstrap = 8;
    cfg.t_initial = 0.0;
    cfg.cooling = std::pow(1e-3, 1.0 / static_cast<double>(cfg.n_iter));
    return cfg;
}

void SaConfig::validate() const {
    if (n_iter == 0 || n_restart == 0 || n_bootstrap == 0)
        throw InvalidConfig("SaConfig: iteration, restart and bootstrap counts must be positive");
    if (t_initial < 0.0) throw InvalidConfig("SaConfig: t_initial must be >= 0 (0 = auto)");
    if (!(cooling > 0.0 && cooling < 1.0)) throw InvalidConfig("SaConfig: cooling must be in (0,1)");
}

std::vector<std::size_t> basis_select_vertstack(const MatrixEnsemble &ens, std::size_t r) {
    ens.validate();
    if (r > ens.cols()) throw InvalidConfig("basis_select_vertstack: r exceeds column count");
    const std::size_t m = ens.rows(), n = ens.cols(), ns = ens.count();

    DataMatrix stacked(ns * m, n);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) stacked(s * m + i, j) = ens.samples[s](i, j);

    const PivotedQr f = qr_column_pivoted(stacked, r);
    if (f.rank < r)
        throw RankDeficient("basis_select_vertstack: stacked ensemble rank below requested rank");
    return {f.pivots.begin(), f.pivots.begin() + static_cast<std::ptrdiff_t>(r)};
}

DataMatrix bootstrap_sample(const MatrixEnsemble &ens, Rng &rng) {
    ens.validate();
    const std::size_t m = ens.rows(), n = ens.cols(), ns = ens.count();
    DataMatrix out(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t pick = (ns == 1) ? 0 : static_cast<std::size_t>(rng.uniform_index(ns));
        for (std::size_t i = 0; i < m; ++i) out(i, j) = ens.samples[pick](i, j);
    }
    return out;
}

double saa_cost(std::span<const std::size_t> basis, const std::vector<DataMatrix> &bootstraps) {
    if (bootstraps.empty()) throw InvalidConfig("saa_cost: no bootstrap samples");
    double total = 0.0;
    for (const DataMatrix &l : bootstraps) {
        if (basis.size() == l.cols()) continue;  // full basis fits exactly
        const PrescribedBasisFit fit = prescribed_basis_fit(l, basis, /*want_coefficients=*/false);
        if (fit.complete) {
            total += fit.residual_sq;
        } else {
            // exactly dependent skeleton: minimum-norm solution
            const DataMatrix lr = l.select_cols(basis);
            const DataMatrix c = least_squares_min_norm(lr, l);
            const double res = frobenius_norm_diff(l, multiply(lr, c));
            total += res * res;
        }
    }
    return total / static_cast<double>(bootstraps.size());
}

SubsetAnnealResult anneal_subset(std::size_t n, std::size_t r,
                                 const std::function<double(std::span<const std::size_t>)> &cost,
                                 std::size_t n_iter, double t_initial, double cooling, Rng rng) {
    if (r == 0 || r >= n) throw InvalidConfig("anneal_subset: need 0 < r < n");

    // Uniform random distinct subset via partial Fisher-Yates.
    std::vector<std::size_t> pool(n);
    for (std::size_t j = 0; j < n; ++j) pool[j] = j;
    for (std::size_t j = 0; j < r; ++j) {
        const std::size_t k = j + static_cast<std::size_t>(rng.uniform_index(n - j));
        std::swap(pool[j], pool[k]);
    }
    std::vector<std::size_t> current(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(r));
    std::vector<std::size_t> outside(pool.begin() + static_cast<std::ptrdiff_t>(r), pool.end());

    double current_cost = cost(current);
    SubsetAnnealResult best;
    best.indices = current;
    best.cost = current_cost;

    double temperature = (t_initial > 0.0) ? t_initial : 0.1 * std::max(current_cost, 1e-300);
    std::vector<std::size_t> proposal = current;
    for (std::size_t k = 0; k < n_iter; ++k) {
        const std::size_t in_pos = static_cast<std::size_t>(rng.uniform_index(r));
        const std::size_t out_pos = static_cast<std::size_t>(rng.uniform_index(n - r));
        proposal = current;
        proposal[in_pos] = outside[out_pos];
        const double proposal_cost = cost(proposal);

        bool accept;
        if (proposal_cost < current_cost) {
            ++best.improving_proposals;
            ++best.improving_accepted;
            accept = true;
        } else {
            const double delta = proposal_cost - current_cost;
            accept = temperature > 0.0 && rng.uniform() < std::exp(-delta / temperature);
        }
        if (accept) {
            std::swap(current[in_pos], outside[out_pos]);
            current_cost = proposal_cost;
            if (current_cost < best.cost) {
                best.cost = current_cost;
                best.indices = current;
            }
        }
        temperature *= cooling;
    }
    return best;
}

std::vector<std::size_t> basis_select_sa(const MatrixEnsemble &ens, std::size_t r,
                                         const SaConfig &cfg, const Rng &rng) {
    ens.validate();
    cfg.validate();
    if (r >= ens.cols())
        throw InvalidConfig("basis_select_sa: need r < N (use the full basis otherwise)");

    const std::size_t n_restart = cfg.n_restart;
    std::vector<SubsetAnnealResult> results(n_restart);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(n_restart); ++t) {
        Rng restart_rng = rng.derive("sa_restart", static_cast<std::uint64_t>(t));
        Rng boot_rng = restart_rng.derive("bootstrap");

        std::vector<DataMatrix> bootstraps;
        bootstraps.reserve(cfg.n_bootstrap);
        for (std::size_t b = 0; b < cfg.n_bootstrap; ++b)
            bootstraps.push_back(bootstrap_sample(ens, boot_rng));

        const auto cost = [&](std::span<const std::size_t> basis) {
            return saa_cost(basis, bootstraps);
        };
        results[static_cast<std::size_t>(t)] = anneal_subset(
            ens.cols(), r, cost, cfg.n_iter, cfg.t_initial, cfg.cooling,
            restart_rng.derive("anneal"));
    }

    std::size_t winner = 0;
    for (std::size_t t = 1; t < n_restart; ++t)
        if (results[t].cost < results[winner].cost) winner = t;
    return results[winner].indices;
}

}  // namespace mmid
