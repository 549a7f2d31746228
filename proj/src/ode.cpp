#include "mmid/ode.hpp"

#include <algorithm>
#include <cmath>

namespace mmid {

namespace {

struct Tableau {
    std::size_t stages;
    const double *a;     // row-packed lower triangle, stage i uses a[i*(i-1)/2 + j]
    const double *b;     // higher-order weights (propagated solution)
    const double *bhat;  // embedded lower-order weights
    const double *c;
    double error_exponent;
};

// Dormand-Prince 5(4). The last stage is the FSAL evaluation at the new
// point: b[6] = 0 here because stage 7 only feeds the error estimate.
constexpr double dp_a[] = {
    1.0 / 5,
    3.0 / 40, 9.0 / 40,
    44.0 / 45, -56.0 / 15, 32.0 / 9,
    19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729,
    9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656,
    35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
constexpr double dp_b[] = {35.0 / 384,     0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double dp_bhat[] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                              -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
constexpr double dp_c[] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr Tableau kDormandPrince{7, dp_a, dp_b, dp_bhat, dp_c, 1.0 / 5};

// Bogacki-Shampine 3(2), also FSAL.
constexpr double bs_a[] = {
    1.0 / 2,
    0.0, 3.0 / 4,
    2.0 / 9, 1.0 / 3, 4.0 / 9};
constexpr double bs_b[] = {2.0 / 9, 1.0 / 3, 4.0 / 9, 0.0};
constexpr double bs_bhat[] = {7.0 / 24, 1.0 / 4, 1.0 / 3, 1.0 / 8};
constexpr double bs_c[] = {0.0, 1.0 / 2, 3.0 / 4, 1.0};
constexpr Tableau kBogackiShampine{4, bs_a, bs_b, bs_bhat, bs_c, 1.0 / 3};

Trajectory integrate(const OdeProblem &p, const Tableau &tab) {
    p.validate();
    const std::size_t dim = p.dimension;
    const double span = p.t1 - p.t0;
    const double h_min = 1e-14 * span;

    std::vector<std::vector<double>> k(tab.stages, std::vector<double>(dim));
    std::vector<double> x = p.x0, x_new(dim), x_hat(dim), stage(dim);

    Trajectory tr;
    tr.times.push_back(p.t0);
    tr.states.push_back(x);
    p.rhs(p.t0, x, k[0]);
    tr.derivatives.push_back(k[0]);

    double t = p.t0;
    double h = 1e-3 * span;
    bool fsal_ready = true;  // k[0] already holds f(t, x)

    while (t < p.t1) {
        if (h < h_min)
            throw StepSizeUnderflow("step size underflow at t = " + std::to_string(t));
        bool last = false;
        if (h >= p.t1 - t) {
            h = p.t1 - t;
            last = true;
        }

        if (!fsal_ready) p.rhs(t, x, k[0]);
        for (std::size_t s = 1; s < tab.stages; ++s) {
            const double *row = tab.a + s * (s - 1) / 2;
            for (std::size_t i = 0; i < dim; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < s; ++j) acc += row[j] * k[j][i];
                stage[i] = x[i] + h * acc;
            }
            p.rhs(t + tab.c[s] * h, stage, k[s]);
        }

        double err_sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double hi = 0.0, lo = 0.0;
            for (std::size_t s = 0; s < tab.stages; ++s) {
                hi += tab.b[s] * k[s][i];
                lo += tab.bhat[s] * k[s][i];
            }
            x_new[i] = x[i] + h * hi;
            x_hat[i] = x[i] + h * lo;
            if (!std::isfinite(x_new[i]) || !std::isfinite(x_hat[i]))
                throw NonFiniteState("non-finite state at t = " + std::to_string(t));
            const double scale_i =
                p.atol + p.rtol * std::max(std::abs(x_new[i]), std::abs(x_hat[i]));
            const double e = (x_new[i] - x_hat[i]) / scale_i;
            err_sq += e * e;
        }
        const double err = std::sqrt(err_sq / static_cast<double>(dim));

        double factor = (err > 0.0) ? 0.9 * std::pow(err, -tab.error_exponent) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);

        if (err <= 1.0) {
            t = last ? p.t1 : t + h;
            x = x_new;
            // FSAL: the final stage is f(t + h, x_new).
            k[0] = k[tab.stages - 1];
            fsal_ready = true;
            tr.times.push_back(t);
            tr.states.push_back(x);
            tr.derivatives.push_back(k[0]);
            ++tr.accepted_steps;
        } else {
            ++tr.rejected_steps;
            fsal_ready = true;  // x unchanged, k[0] still valid
        }
        h *= factor;
    }
    return tr;
}

}  // namespace

void OdeProblem::validate() const {
    if (dimension == 0 || x0.size() != dimension)
        throw InvalidConfig("OdeProblem: state size must match dimension");
    if (!rhs) throw InvalidConfig("OdeProblem: missing rhs");
    if (!(t1 > t0)) throw InvalidConfig("OdeProblem: need t1 > t0");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidConfig("OdeProblem: tolerances must be > 0");
}

Trajectory integrate_rk45(const OdeProblem &p) { return integrate(p, kDormandPrince); }
Trajectory integrate_rk23(const OdeProblem &p) { return integrate(p, kBogackiShampine); }

DataMatrix sample_on_grid(const Trajectory &tr, std::span<const double> grid) {
    if (grid.empty()) throw GridOutOfRange("empty sampling grid");
    const double t0 = tr.times.front(), t1 = tr.times.back();
    const double slack = 1e-12 * (t1 - t0);
    const std::size_t dim = tr.states.front().size();

    DataMatrix out(grid.size(), dim);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double t = grid[g];
        if (t < t0 - slack || t > t1 + slack)
            throw GridOutOfRange("grid point " + std::to_string(t) + " outside trajectory span");
        t = std::clamp(t, t0, t1);

        const auto upper = std::upper_bound(tr.times.begin(), tr.times.end(), t);
        std::size_t hi = static_cast<std::size_t>(upper - tr.times.begin());
        hi = std::clamp<std::size_t>(hi, 1, tr.times.size() - 1);
        const std::size_t lo = hi - 1;

        const double h = tr.times[hi] - tr.times[lo];
        const double theta = (t - tr.times[lo]) / h;
        const double t2 = theta * theta, t3 = t2 * theta;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + theta;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        for (std::size_t i = 0; i < dim; ++i) {
            out(g, i) = h00 * tr.states[lo][i] + h10 * h * tr.derivatives[lo][i] +
                        h01 * tr.states[hi][i] + h11 * h * tr.derivatives[hi][i];
        }
    }
    return out;
}

}  // namespace mmid
