// helpers.hpp — deterministic generators and finite differences shared by
// the test suites. All randomness is seeded per test for reproducibility.

#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <random>

#include "gnm/channels.hpp"
#include "gnm/symplectic.hpp"

namespace gnm::testing {

inline Matrix random_matrix(std::mt19937& rng, int rows, int cols, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

/// R R^T + (1 + u) I is symmetric and dominates the identity, hence physical.
inline CovarianceMatrix random_physical_state(std::mt19937& rng, int modes) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const int d = 2 * modes;
    const Matrix r = random_matrix(rng, d, d);
    Matrix m = r * r.transpose() + (1.0 + dist(rng)) * Matrix::Identity(d, d);
    return CovarianceMatrix(modes, std::move(m));
}

/// Arbitrary T; N = R R^T + (|1 - det T| + u) I guarantees the single-mode
/// CPTP conditions with margin u.
inline GaussianChannel random_cptp_single_mode(std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(0.01, 1.0);
    const Matrix t = random_matrix(rng, 2, 2, 1.5);
    const Matrix r = random_matrix(rng, 2, 2);
    const double floor = std::abs(1.0 - t.determinant()) + dist(rng);
    Matrix n = r * r.transpose() + floor * Matrix::Identity(2, 2);
    return GaussianChannel(1, t, std::move(n));
}

/// Unconstrained single-mode channel (may be non-CPTP); straddles the
/// CPTP boundary so predicate-agreement tests see both verdicts.
inline GaussianChannel random_channel_single_mode(std::mt19937& rng) {
    const Matrix t = random_matrix(rng, 2, 2, 1.5);
    const Matrix r = random_matrix(rng, 2, 2, 1.2);
    Matrix n = 0.5 * (r + r.transpose());
    n += Matrix::Identity(2, 2) * 0.8;
    return GaussianChannel(1, t, std::move(n));
}

/// exp(Omega A) with symmetric A lies in the symplectic group.
inline Matrix random_symplectic(std::mt19937& rng, int modes, double scale = 0.4) {
    const int d = 2 * modes;
    const Matrix a = random_matrix(rng, d, d, scale);
    const Matrix gen = symplectic_form(modes) * (0.5 * (a + a.transpose()));
    return gen.exp();
}

/// Central difference with the step rule used throughout the tests.
inline double finite_difference(const std::function<double(double)>& f, double t) {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace gnm::testing
