// oracles.hpp — closed-form expressions for the smallest symplectic
// eigenvalue of the steering Schur complement under isotropic noise on the
// first mode, plus asymptotic expansions. These are independent of the
// matrix pipeline and serve as test oracles; lossy channels enter through
// the substitution eta_eff = eta / tau^2.

#pragma once

#include <cmath>

namespace gnm::oracles {

/// Two-mode squeezed input: nu_- = (eta cosh 2r + 1) / (eta + cosh 2r).
/// Below 1 (steerable) iff eta_eff < 1.
inline double nu_minus_2mode(double r, double eta_eff) {
    const double c = std::cosh(2.0 * r);
    return (eta_eff * c + 1.0) / (eta_eff + c);
}

/// Three-mode GHZ/W input, Alice = modes 1-2 (first noisy), Bob = mode 3.
/// Always below 1 for r > 0.
inline double nu_minus_3mode(double r, double eta_eff) {
    const double x = std::exp(2.0 * r);
    const double x2 = x * x;
    const double num = x * ((x2 + 2.0) * eta_eff + 3.0 * x) * (x * (2.0 * x * eta_eff + 3.0) + eta_eff);
    const double den = ((x2 + 2.0) * x * eta_eff + 2.0 * x2 + 1.0) *
                       (x * (x2 + 2.0 * x * eta_eff + 2.0) + eta_eff);
    return std::sqrt(num / den);
}

/// Analytic d(nu_-)/d(eta_eff) for the three-mode case; strictly positive,
/// so the steerability is monotonically decreasing in the effective noise.
inline double nu_minus_3mode_deta(double r, double eta_eff) {
    const double x = std::exp(2.0 * r);
    const double x2 = x * x;
    const double x4 = x2 * x2;
    const double x6 = x4 * x2;
    const double e = eta_eff;
    const double num =
        x * (x2 - 1.0) * (x2 - 1.0) *
        (4.0 * x * (2.0 * x4 + 5.0 * x2 + 2.0) * e + 9.0 * (x4 + x2) +
         (2.0 * x6 + 7.0 * x4 + 7.0 * x2 + 2.0) * e * e);
    const double q1 = (x2 + 2.0) * x * e + 2.0 * x2 + 1.0;
    const double q2 = x * (x2 + 2.0 * x * e + 2.0) + e;
    const double den = 2.0 * q1 * q1 * nu_minus_3mode(r, eta_eff) * q2 * q2;
    return num / den;
}

/// Large-squeezing steerability of the three-mode setup:
/// (1/2) ln(e^{2r} / (2 eta_eff)) with O(e^{-2r}) remainder. Requires
/// eta_eff > 0; intended for r >= 3.
inline double steerability_large_r_3mode(double r, double eta_eff) {
    return 0.5 * std::log(std::exp(2.0 * r) / (2.0 * eta_eff));
}

/// Small-squeezing expansions (O(r^3) remainders), used by expansion tests.
inline double nu_minus_2mode_small_r(double r, double eta_eff) {
    return 1.0 - 2.0 * (1.0 - eta_eff) / (1.0 + eta_eff) * r * r;
}

inline double nu_minus_3mode_small_r(double r, double eta_eff) {
    return 1.0 - 16.0 / (9.0 * (eta_eff + 1.0)) * r * r;
}

}  // namespace gnm::oracles
