#include "mmid/qr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace mmid {

namespace {

// Residual norms are tracked by downdating; once a norm has cancelled away
// most of its original magnitude it is recomputed from scratch.
constexpr double kDowndateGuard = 1e-8;

struct QrCore {
    DataMatrix wt;  // n x m: row j holds (reflected) pivot column j
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    std::vector<std::vector<double>> reflectors;
    std::vector<double> reflector_scale;  // 2 / u^T u per step
};

// Shared Householder sweep. With `forced` null the pivot at each step is the
// remaining column of largest residual norm; otherwise the order in `forced`
// is used verbatim. Identical arithmetic either way, so a forced order equal
// to the greedy one reproduces its output exactly.
QrCore qr_core(const DataMatrix &a, std::size_t k_max,
               const std::vector<std::size_t> *forced) {
    const std::size_t m = a.rows(), n = a.cols();
    QrCore core;
    core.wt = a.transposed();
    core.pivots.resize(n);
    for (std::size_t j = 0; j < n; ++j) core.pivots[j] = j;

    std::vector<double> norm2(n), norm2_ref(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += core.wt(j, i) * core.wt(j, i);
        norm2[j] = norm2_ref[j] = s;
    }

    std::vector<std::size_t> position(n);  // current row of each original column
    for (std::size_t j = 0; j < n; ++j) position[j] = j;

    DataMatrix &wt = core.wt;
    core.reflectors.reserve(k_max);
    for (std::size_t s = 0; s < k_max; ++s) {
        std::size_t p;
        if (forced) {
            p = position[(*forced)[s]];
        } else {
            p = s;
            for (std::size_t j = s + 1; j < n; ++j)
                if (norm2[j] > norm2[p]) p = j;
            if (!(norm2[p] > 0.0)) break;  // residual block exactly zero
        }

        if (p != s) {
            for (std::size_t i = 0; i < m; ++i) std::swap(wt(s, i), wt(p, i));
            std::swap(norm2[s], norm2[p]);
            std::swap(norm2_ref[s], norm2_ref[p]);
            std::swap(position[core.pivots[s]], position[core.pivots[p]]);
            std::swap(core.pivots[s], core.pivots[p]);
        }

        // Householder vector u = x + sign(x0)*|x| e1 annihilates x(1:).
        const std::size_t len = m - s;
        double xnorm2 = 0.0;
        for (std::size_t i = s; i < m; ++i) xnorm2 += wt(s, i) * wt(s, i);
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) break;
        const double sign = (wt(s, s) >= 0.0) ? 1.0 : -1.0;

        std::vector<double> u(len);
        for (std::size_t i = 0; i < len; ++i) u[i] = wt(s, s + i);
        u[0] += sign * xnorm;
        double unorm2 = 0.0;
        for (double v : u) unorm2 += v * v;
        const double two_over_u2 = 2.0 / unorm2;

        wt(s, s) = -sign * xnorm;  // R(s, s)
        for (std::size_t i = s + 1; i < m; ++i) wt(s, i) = 0.0;

        const std::int64_t n_all = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
        for (std::int64_t jj = static_cast<std::int64_t>(s) + 1; jj < n_all; ++jj) {
            const std::size_t j = static_cast<std::size_t>(jj);
            double dot = 0.0;
            for (std::size_t i = 0; i < len; ++i) dot += u[i] * wt(j, s + i);
            dot *= two_over_u2;
            for (std::size_t i = 0; i < len; ++i) wt(j, s + i) -= dot * u[i];

            const double rsj = wt(j, s);
            double down = norm2[j] - rsj * rsj;
            if (down <= kDowndateGuard * norm2_ref[j]) {
                down = 0.0;
                for (std::size_t i = s + 1; i < m; ++i) down += wt(j, i) * wt(j, i);
                norm2_ref[j] = down;
            }
            norm2[j] = down;
        }

        core.reflectors.push_back(std::move(u));
        core.reflector_scale.push_back(two_over_u2);
        core.rank = s + 1;
    }
    return core;
}

// R with its diagonal normalized nonnegative; `flipped` records which rows
// changed sign so Q can be kept consistent. The negations are exact, so the
// coefficient back-substitution is unaffected bit for bit.
DataMatrix upper_trapezoid_from_core(const QrCore &core, std::size_t k, std::size_t n,
                                     std::vector<bool> *flipped = nullptr) {
    DataMatrix r(k, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < std::min(j + 1, k); ++l) r(l, j) = core.wt(j, l);
    if (flipped) flipped->assign(k, false);
    for (std::size_t l = 0; l < k; ++l) {
        if (r(l, l) >= 0.0) continue;
        for (std::size_t j = l; j < n; ++j) r(l, j) = -r(l, j);
        if (flipped) (*flipped)[l] = true;
    }
    return r;
}

}  // namespace

std::size_t PivotedQr::numerical_rank(double rel_tol) const {
    if (rank == 0) return 0;
    const double head = std::abs(r(0, 0));
    std::size_t k = 0;
    while (k < rank && std::abs(r(k, k)) > rel_tol * head) ++k;
    return k;
}

PivotedQr qr_column_pivoted(const DataMatrix &a, std::optional<std::size_t> rank_cap) {
    a.require_finite("qr_column_pivoted");
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t k_max = std::min({rank_cap.value_or(std::min(m, n)), m, n});

    QrCore core = qr_core(a, k_max, nullptr);
    const std::size_t k = core.rank;

    PivotedQr out;
    out.pivots = std::move(core.pivots);
    out.rank = k;
    if (k == 0) {  // zero matrix
        out.q = DataMatrix(m, 1);
        out.r = DataMatrix(1, n);
        return out;
    }
    std::vector<bool> flipped;
    out.r = upper_trapezoid_from_core(core, k, n, &flipped);

    // Backward accumulation of the thin Q.
    out.q = DataMatrix(m, k);
    for (std::size_t l = 0; l < k; ++l) out.q(l, l) = 1.0;
    for (std::size_t s = k; s-- > 0;) {
        const auto &u = core.reflectors[s];
        const double scale2 = core.reflector_scale[s];
        const std::int64_t kk = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(static)
        for (std::int64_t ll = 0; ll < kk; ++ll) {
            const std::size_t l = static_cast<std::size_t>(ll);
            double dot = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * out.q(s + i, l);
            dot *= scale2;
            for (std::size_t i = 0; i < u.size(); ++i) out.q(s + i, l) -= dot * u[i];
        }
    }
    for (std::size_t l = 0; l < k; ++l)
        if (flipped[l])
            for (std::size_t i = 0; i < m; ++i) out.q(i, l) = -out.q(i, l);
    return out;
}

DataMatrix id_coefficients_from_r(const DataMatrix &r, const std::vector<std::size_t> &pivots,
                                  std::size_t rank, std::size_t n) {
    const double head = std::abs(r(0, 0));
    for (std::size_t l = 0; l < rank; ++l)
        if (!(std::abs(r(l, l)) > 1e-12 * head))
            throw RankDeficient("basis columns rank deficient at position " + std::to_string(l));

    DataMatrix c(rank, n);
    for (std::size_t l = 0; l < rank; ++l) c(l, pivots[l]) = 1.0;

    const std::int64_t rest = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t jj = static_cast<std::int64_t>(rank); jj < rest; ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        const std::size_t col = pivots[j];
        for (std::size_t l = rank; l-- > 0;) {
            double acc = r(l, j);
            for (std::size_t t = l + 1; t < rank; ++t) acc -= r(l, t) * c(t, col);
            c(l, col) = acc / r(l, l);
        }
    }
    return c;
}

PrescribedBasisFit prescribed_basis_fit(const DataMatrix &a, std::span<const std::size_t> basis,
                                        bool want_coefficients) {
    a.require_finite("prescribed_basis_fit");
    const std::size_t n = a.cols(), r = basis.size();
    if (r == 0 || r > std::min(a.rows(), n))
        throw InvalidConfig("prescribed_basis_fit: bad basis size");
    std::vector<std::size_t> order(basis.begin(), basis.end());
    {
        std::vector<bool> seen(n, false);
        for (std::size_t j : order) {
            if (j >= n || seen[j]) throw InvalidConfig("prescribed_basis_fit: bad basis index");
            seen[j] = true;
        }
    }

    QrCore core = qr_core(a, r, &order);
    PrescribedBasisFit out;
    if (core.rank < r) return out;  // exactly dependent basis columns
    out.complete = true;

    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = r; i < a.rows(); ++i)
            out.residual_sq += core.wt(j, i) * core.wt(j, i);

    const DataMatrix rt = upper_trapezoid_from_core(core, r, n);
    const double head = std::abs(rt(0, 0));
    for (std::size_t l = 0; l < r; ++l)
        if (!(std::abs(rt(l, l)) > 1e-12 * head)) return out;
    out.rank_ok = true;
    if (want_coefficients) out.coefficients = id_coefficients_from_r(rt, core.pivots, r, n);
    return out;
}

DataMatrix permuted_copy(const DataMatrix &a, const std::vector<std::size_t> &pivots) {
    DataMatrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < pivots.size(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, pivots[j]);
    return out;
}

}  // namespace mmid
