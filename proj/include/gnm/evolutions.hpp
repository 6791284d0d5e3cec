// evolutions.hpp — time-parametrized single-mode channel families
// (tau(t) I, eta(t) I) with analytic derivatives, CP-divisibility verdicts
// (closed-form and general infinitesimal criterion) and backflow sign
// predicates.

#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "gnm/channels.hpp"
#include "gnm/witnesses.hpp"

namespace gnm {

inline constexpr double kCpTol = 1e-9;

enum class EvolutionKind { classical_noise, lossy, custom };

/// Evolution t -> (tau(t) I, eta(t) I) on [0, t_max] with tau(0) = 1 and
/// eta(0) = 0 (identity map at t = 0). Derivatives are supplied analytically
/// by the caller; the non-Markovianity verdict never differentiates
/// numerically.
struct Evolution {
    EvolutionKind kind;
    std::function<double(double)> tau;
    std::function<double(double)> tau_dot;
    std::function<double(double)> eta;
    std::function<double(double)> eta_dot;
    double t_max;
};

constexpr double kUnboundedDomain = std::numeric_limits<double>::infinity();

/// Classical noise (tau == 1). Validates eta(0) = 0.
Evolution make_classical_noise(std::function<double(double)> eta,
                               std::function<double(double)> eta_dot,
                               double t_max = kUnboundedDomain);

/// General lossy family. Validates tau(0) = 1, eta(0) = 0.
Evolution make_lossy(std::function<double(double)> tau, std::function<double(double)> tau_dot,
                     std::function<double(double)> eta, std::function<double(double)> eta_dot,
                     double t_max = kUnboundedDomain);

/// Same data as make_lossy but flagged custom: Markovianity verdicts go
/// through the general infinitesimal criterion instead of the closed form.
Evolution make_custom(std::function<double(double)> tau, std::function<double(double)> tau_dot,
                      std::function<double(double)> eta, std::function<double(double)> eta_dot,
                      double t_max = kUnboundedDomain);

/// eta(t) = t^2 / (t^2 - 2t + 2): grows from 0 to the peak eta(2) = 2, then
/// decays towards 1. Non-Markovian exactly for t > 2.
Evolution noise_profile_rational(double t_max = kUnboundedDomain);

/// The same profile rescaled by 2 (peak eta(2) = 4, limit 2).
Evolution noise_profile_rational_scaled(double t_max = kUnboundedDomain);

/// eta(t) = eta0 (1 - cos(2 pi t)) / 2: periodic, peak eta0 at half-integers.
Evolution noise_profile_oscillating(double eta0, double t_max = kUnboundedDomain);

/// Dynamical map at time t; (I, 0) at t = 0.
GaussianChannel channel_at(const Evolution& ev, double t);

struct NmVerdict {
    double t;
    double lambda_plus;   // eta_dot - 2 (eta + 1) tau_dot / tau
    double lambda_minus;  // eta_dot - 2 (eta - 1) tau_dot / tau
    bool markovian_at_t;  // min(lambda_plus, lambda_minus) >= -cp_tol
};

/// Infinitesimal CP-divisibility verdict at time t. Lossy-form evolutions
/// use the closed-form eigenvalues lambda±; custom evolutions evaluate the
/// general criterion matrix.
NmVerdict is_markovian_at(const Evolution& ev, double t, double cp_tol = kCpTol);

/// Minimum eigenvalue of the general smooth-dynamics criterion matrix
/// Ndot - (Tdot T^{-1} (i Omega + N) + (i Omega + N) T^{-T} Tdot^T).
/// The dynamics is infinitesimally CP at t iff this is >= 0.
double cp_criterion_min_eigenvalue(const Matrix& transform, const Matrix& noise,
                                   const Matrix& transform_dot, const Matrix& noise_dot);

enum class AncillaSetup { two_mode, three_mode };

/// Sign predicate for a steering backflow at time t:
///   three_mode: eta_dot - 2 eta tau_dot / tau < 0
///   two_mode:   additionally eta < tau^2 (the non-GIB condition)
bool steering_backflow_predicate(const Evolution& ev, double t, AncillaSetup setup);

/// Small-r predicate for a two-mode entanglement backflow at time t:
/// eta - tau^2 - 1 < 0 and eta_dot - 2 (eta - 1) tau_dot / tau < 0.
bool entanglement_backflow_predicate_2mode(const Evolution& ev, double t);

/// Maximal grid runs of non-Markovian verdicts, as half-open intervals
/// anchored at sample points.
std::vector<TimeInterval> non_markovian_intervals(const Evolution& ev,
                                                  std::span<const double> grid,
                                                  double cp_tol = kCpTol);

}  // namespace gnm
