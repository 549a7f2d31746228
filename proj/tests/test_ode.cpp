#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmid/ode.hpp"
#include "mmid/problems.hpp"

using namespace mmid;

namespace {

OdeProblem scalar_problem(std::function<double(double, double)> f, double x0, double t1,
                          double rtol) {
    OdeProblem p;
    p.dimension = 1;
    p.x0 = {x0};
    p.t0 = 0.0;
    p.t1 = t1;
    p.rtol = rtol;
    p.atol = 1e-9;
    p.rhs = [f](double t, std::span<const double> x, std::span<double> dxdt) {
        dxdt[0] = f(t, x[0]);
    };
    return p;
}

}  // namespace

TEST_CASE("zero derivative keeps the state constant") {
    const auto tr = integrate_rk45(scalar_problem([](double, double) { return 0.0; }, 3.5, 2.0, 1e-6));
    for (const auto &s : tr.states) CHECK(s[0] == 3.5);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 2.0);
}

TEST_CASE("exponential growth hits e at the paper tolerance") {
    const auto tr = integrate_rk45(scalar_problem([](double, double x) { return x; }, 1.0, 1.0, 1e-6));
    CHECK(std::abs(tr.states.back()[0] - std::exp(1.0)) <= 1e-5 * std::exp(1.0));
}

TEST_CASE("pitchfork equilibria are reached on both branches") {
    // Long enough that the slowest case (xi = 1) has relaxed to +-sqrt(xi).
    const double horizon = 20.0;
    for (double xi : {1.0, 2.0, 4.0}) {
        const auto up = integrate_rk45(scalar_problem(
            [xi](double, double x) { return xi * x - x * x * x; }, 1e-3, horizon, 1e-6));
        CHECK(std::abs(up.states.back()[0] - std::sqrt(xi)) <= 1e-4 * std::sqrt(xi));
        const auto down = integrate_rk23(scalar_problem(
            [xi](double, double x) { return xi * x - x * x * x; }, -1e-3, horizon, 1e-2));
        CHECK(down.states.back()[0] < 0.0);
        CHECK(std::abs(down.states.back()[0] + std::sqrt(xi)) <= 0.05 * std::sqrt(xi));
    }
}

TEST_CASE("rk23 linear decay at its paper tolerance") {
    const auto tr = integrate_rk23(scalar_problem([](double, double x) { return -x; }, 1.0, 1.0, 1e-2));
    CHECK(std::abs(tr.states.back()[0] - std::exp(-1.0)) <= 2e-2 * std::exp(-1.0));
}

TEST_CASE("looser tolerance takes fewer accepted steps") {
    const auto coarse = integrate_rk23(
        scalar_problem([](double, double x) { return 4.0 * x - x * x * x; }, 1e-3, 10.0, 1e-2));
    const auto fine = integrate_rk23(
        scalar_problem([](double, double x) { return 4.0 * x - x * x * x; }, 1e-3, 10.0, 1e-6));
    CHECK(coarse.accepted_steps < fine.accepted_steps);
}

TEST_CASE("halving the tolerance never hurts the exponential error") {
    double prev = 1e9;
    for (double rtol = 1e-3; rtol >= 1e-8; rtol *= 0.5) {
        const auto tr =
            integrate_rk45(scalar_problem([](double, double x) { return x; }, 1.0, 1.0, rtol));
        const double err = std::abs(tr.states.back()[0] - std::exp(1.0));
        CHECK(err <= prev * (1.0 + 1e-12) + 1e-15);
        prev = err;
    }
}

TEST_CASE("grid sampling is exact at the stored nodes") {
    const auto tr = integrate_rk45(
        scalar_problem([](double t, double) { return std::cos(t); }, 0.0, 6.0, 1e-6));
    const DataMatrix at_knots = sample_on_grid(tr, tr.times);
    for (std::size_t i = 0; i < tr.times.size(); ++i) CHECK(at_knots(i, 0) == tr.states[i][0]);
}

TEST_CASE("hermite interpolation reproduces a linear solution") {
    const auto tr = integrate_rk45(scalar_problem([](double, double) { return 1.0; }, 0.0, 5.0, 1e-6));
    const auto grid = linspace(0.0, 5.0, 77);
    const DataMatrix s = sample_on_grid(tr, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(s(i, 0) - grid[i]) <= 1e-12);
}

TEST_CASE("midpoint interpolation error is fourth order in the step") {
    const auto tr = integrate_rk45(
        scalar_problem([](double t, double) { return std::cos(t); }, 0.0, 6.0, 1e-6));
    for (std::size_t k = 0; k + 1 < tr.times.size(); ++k) {
        const double mid = 0.5 * (tr.times[k] + tr.times[k + 1]);
        const double h = tr.times[k + 1] - tr.times[k];
        const std::vector<double> grid{mid};
        const DataMatrix s = sample_on_grid(tr, grid);
        // Hermite truncation h^4 max|f''''| / 384 plus integration error.
        const double bound = h * h * h * h / 384.0 * 10.0 + 2e-5;
        CHECK(std::abs(s(0, 0) - std::sin(mid)) <= bound);
    }
}

TEST_CASE("grid outside the trajectory span raises") {
    const auto tr = integrate_rk45(scalar_problem([](double, double) { return 1.0; }, 0.0, 1.0, 1e-6));
    const std::vector<double> bad{1.5};
    CHECK_THROWS_AS(sample_on_grid(tr, bad), GridOutOfRange);
}

TEST_CASE("pathological problems raise instead of looping") {
    // Severely stiff problem: the controller shrinks h below the floor.
    CHECK_THROWS_AS(
        integrate_rk45(scalar_problem([](double, double x) { return -1e16 * x; }, 1.0, 1.0, 1e-6)),
        StepSizeUnderflow);
    // NaN kills the state check.
    CHECK_THROWS_AS(integrate_rk45(scalar_problem(
                        [](double t, double) { return t > 0.1 ? std::nan("") : 1.0; }, 0.0, 1.0,
                        1e-6)),
                    NonFiniteState);
}
