// ode.hpp — embedded Dormand-Prince 5(4) integrator with 4th-order dense
// output, used to propagate covariance matrices and the (tau, eta) pair.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gnm/errors.hpp"

namespace gnm {

namespace detail {

// DOPRI5 tableau
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
// b - bhat (error weights)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace detail

/// Solve y' = rhs(t, y) and return the solution sampled at every grid point.
/// `grid` must be non-decreasing; grid.front() is the initial time. Values at
/// interior grid points come from the continuous (dense) extension of the
/// accepted steps, so refining the grid does not change the step sequence.
/// `max_step` caps the step size; keeping it near the grid spacing keeps the
/// dense-output interpolation error at the level of the step error.
template <class Rhs>
std::vector<Eigen::VectorXd> integrate_on_grid(Rhs&& rhs, const Eigen::VectorXd& y0,
                                               const std::vector<double>& grid, double rel_tol,
                                               double abs_tol = 1e-12,
                                               double max_step =
                                                   std::numeric_limits<double>::infinity()) {
    if (grid.empty()) throw DomainError("integrate_on_grid: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[i - 1]) throw DomainError("integrate_on_grid: grid must be sorted");

    const Eigen::Index n = y0.size();
    std::vector<Eigen::VectorXd> out;
    out.reserve(grid.size());
    out.push_back(y0);
    if (grid.size() == 1) return out;

    const double t_end = grid.back();
    double t = grid.front();
    Eigen::VectorXd y = y0;
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y_next(n), err(n);
    rhs(t, y, k1);

    double h = std::min((t_end - t) / 100.0, max_step);
    std::size_t next_sample = 1;
    long steps = 0;
    const long max_steps = 10'000'000;

    while (t < t_end) {
        if (++steps > max_steps)
            throw IntegrationError("integrate_on_grid: step limit exceeded");
        h = std::min({h, t_end - t, max_step});
        if (t + h == t)
            throw IntegrationError("integrate_on_grid: step size underflow at t = " +
                                   std::to_string(t));

        using namespace detail;
        ytmp = y + h * (a21 * k1);
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        y_next = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, y_next, k7);

        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = abs_tol + rel_tol * std::max(std::abs(y(i)), std::abs(y_next(i)));
            const double q = err(i) / sc;
            err_norm += q * q;
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(n));

        if (err_norm <= 1.0) {
            // dense output over [t, t+h]
            const Eigen::VectorXd ydiff = y_next - y;
            const Eigen::VectorXd bspl = h * k1 - ydiff;
            const Eigen::VectorXd r4 = ydiff - h * k7 - bspl;
            const Eigen::VectorXd r5 =
                h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            while (next_sample < grid.size() && grid[next_sample] <= t + h) {
                const double theta = (grid[next_sample] - t) / h;
                const double th1 = 1.0 - theta;
                out.push_back(y + theta * (ydiff + th1 * (bspl + theta * (r4 + th1 * r5))));
                ++next_sample;
            }
            t += h;
            y.swap(y_next);
            k1.swap(k7);  // FSAL
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, 5.0);
        h *= factor;
    }

    // t reached t_end; any remaining samples equal the final state
    while (next_sample < grid.size()) {
        out.push_back(y);
        ++next_sample;
    }
    return out;
}

}  // namespace gnm
