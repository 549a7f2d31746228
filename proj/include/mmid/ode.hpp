#ifndef MMID_ODE_HPP
#define MMID_ODE_HPP

#include <functional>
#include <span>
#include <vector>

#include "mmid/matrix.hpp"

namespace mmid {

struct OdeProblem {
    std::size_t dimension = 1;
    std::function<void(double t, std::span<const double> x, std::span<double> dxdt)> rhs;
    std::vector<double> x0;
    double t0 = 0.0;
    double t1 = 1.0;
    double rtol = 1e-6;
    double atol = 1e-9;

    void validate() const;
};

// Accepted nodes with states and RHS evaluations (the latter feed the cubic
// Hermite dense output).
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> derivatives;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

// Dormand-Prince 5(4) embedded pair, mixed absolute/relative error control,
// step factor clamped to [0.2, 5] with safety 0.9 and exponent 1/5.
Trajectory integrate_rk45(const OdeProblem &p);

// Bogacki-Shampine 3(2) pair; exponent 1/3.
Trajectory integrate_rk23(const OdeProblem &p);

// States at the grid points, one column per state component, via cubic
// Hermite interpolation between stored nodes. Exact at the nodes.
DataMatrix sample_on_grid(const Trajectory &tr, std::span<const double> grid);

}  // namespace mmid

#endif
