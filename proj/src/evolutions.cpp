#include "gnm/evolutions.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <string>

namespace gnm {

namespace {

void check_initial_conditions(const Evolution& ev) {
    if (std::abs(ev.tau(0.0) - 1.0) > 1e-9)
        throw InvariantViolationError("Evolution: tau(0) must be 1");
    if (std::abs(ev.eta(0.0)) > 1e-9)
        throw InvariantViolationError("Evolution: eta(0) must be 0");
    if (!(ev.t_max > 0.0)) throw DomainError("Evolution: t_max must be positive");
}

void check_time(const Evolution& ev, double t, const char* who) {
    if (!(t >= 0.0) || t > ev.t_max)
        throw DomainError(std::string(who) + ": t = " + std::to_string(t) +
                          " outside [0, t_max]");
}

double tau_at(const Evolution& ev, double t, const char* who) {
    const double tau = ev.tau(t);
    if (!(tau > 0.0))
        throw DegenerateEvolutionError(std::string(who) + ": tau(t) <= 0 at t = " +
                                       std::to_string(t));
    return tau;
}

}  // namespace

Evolution make_classical_noise(std::function<double(double)> eta,
                               std::function<double(double)> eta_dot, double t_max) {
    Evolution ev{EvolutionKind::classical_noise,
                 [](double) { return 1.0; },
                 [](double) { return 0.0; },
                 std::move(eta),
                 std::move(eta_dot),
                 t_max};
    check_initial_conditions(ev);
    return ev;
}

Evolution make_lossy(std::function<double(double)> tau, std::function<double(double)> tau_dot,
                     std::function<double(double)> eta, std::function<double(double)> eta_dot,
                     double t_max) {
    Evolution ev{EvolutionKind::lossy, std::move(tau),    std::move(tau_dot),
                 std::move(eta),       std::move(eta_dot), t_max};
    check_initial_conditions(ev);
    return ev;
}

Evolution make_custom(std::function<double(double)> tau, std::function<double(double)> tau_dot,
                      std::function<double(double)> eta, std::function<double(double)> eta_dot,
                      double t_max) {
    Evolution ev = make_lossy(std::move(tau), std::move(tau_dot), std::move(eta),
                              std::move(eta_dot), t_max);
    ev.kind = EvolutionKind::custom;
    return ev;
}

Evolution noise_profile_rational(double t_max) {
    auto eta = [](double t) { return t * t / (t * t - 2.0 * t + 2.0); };
    auto eta_dot = [](double t) {
        const double d = t * t - 2.0 * t + 2.0;
        return 2.0 * t * (2.0 - t) / (d * d);
    };
    return make_classical_noise(eta, eta_dot, t_max);
}

Evolution noise_profile_rational_scaled(double t_max) {
    auto eta = [](double t) { return 2.0 * t * t / (t * t - 2.0 * t + 2.0); };
    auto eta_dot = [](double t) {
        const double d = t * t - 2.0 * t + 2.0;
        return 4.0 * t * (2.0 - t) / (d * d);
    };
    return make_classical_noise(eta, eta_dot, t_max);
}

Evolution noise_profile_oscillating(double eta0, double t_max) {
    if (!std::isfinite(eta0) || eta0 < 0.0)
        throw DomainError("noise_profile_oscillating: eta0 must be finite and >= 0");
    const double two_pi = 2.0 * M_PI;
    auto eta = [eta0, two_pi](double t) { return eta0 * (1.0 - std::cos(two_pi * t)) / 2.0; };
    auto eta_dot = [eta0, two_pi](double t) { return eta0 * M_PI * std::sin(two_pi * t); };
    return make_classical_noise(eta, eta_dot, t_max);
}

GaussianChannel channel_at(const Evolution& ev, double t) {
    check_time(ev, t, "channel_at");
    return isotropic_channel(ev.tau(t), ev.eta(t));
}

double cp_criterion_min_eigenvalue(const Matrix& transform, const Matrix& noise,
                                   const Matrix& transform_dot, const Matrix& noise_dot) {
    if (transform.rows() % 2 != 0) throw InvalidDimensionError("cp_criterion: odd dimension");
    const int n = static_cast<int>(transform.rows()) / 2;
    const std::complex<double> im(0.0, 1.0);
    const Eigen::MatrixXcd omega_n =
        im * symplectic_form(n).cast<std::complex<double>>() + noise.cast<std::complex<double>>();
    const Matrix rate = transform_dot * transform.inverse();  // Tdot T^{-1}
    const Eigen::MatrixXcd x = rate.cast<std::complex<double>>() * omega_n;
    const Eigen::MatrixXcd crit =
        noise_dot.cast<std::complex<double>>() - x - x.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(crit, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

NmVerdict is_markovian_at(const Evolution& ev, double t, double cp_tol) {
    check_time(ev, t, "is_markovian_at");
    const double tau = tau_at(ev, t, "is_markovian_at");
    const double eta = ev.eta(t);
    const double tau_dot = ev.tau_dot(t);
    const double eta_dot = ev.eta_dot(t);
    const double rate = tau_dot / tau;

    NmVerdict v;
    v.t = t;
    v.lambda_plus = eta_dot - 2.0 * (eta + 1.0) * rate;
    v.lambda_minus = eta_dot - 2.0 * (eta - 1.0) * rate;

    if (ev.kind == EvolutionKind::custom) {
        const Matrix id = Matrix::Identity(2, 2);
        const double min_eig = cp_criterion_min_eigenvalue(tau * id, eta * id, tau_dot * id,
                                                           eta_dot * id);
        v.markovian_at_t = min_eig >= -cp_tol;
    } else {
        v.markovian_at_t = std::min(v.lambda_plus, v.lambda_minus) >= -cp_tol;
    }
    return v;
}

bool steering_backflow_predicate(const Evolution& ev, double t, AncillaSetup setup) {
    if (ev.kind == EvolutionKind::custom)
        throw UnsupportedFormError("steering_backflow_predicate: requires a lossy-form evolution");
    check_time(ev, t, "steering_backflow_predicate");
    const double tau = tau_at(ev, t, "steering_backflow_predicate");
    const double eta = ev.eta(t);
    const double falling = ev.eta_dot(t) - 2.0 * eta * ev.tau_dot(t) / tau;
    if (setup == AncillaSetup::three_mode) return falling < 0.0;
    return falling < 0.0 && eta < tau * tau;
}

bool entanglement_backflow_predicate_2mode(const Evolution& ev, double t) {
    if (ev.kind == EvolutionKind::custom)
        throw UnsupportedFormError(
            "entanglement_backflow_predicate_2mode: requires a lossy-form evolution");
    check_time(ev, t, "entanglement_backflow_predicate_2mode");
    const double tau = tau_at(ev, t, "entanglement_backflow_predicate_2mode");
    const double eta = ev.eta(t);
    const double falling = ev.eta_dot(t) - 2.0 * (eta - 1.0) * ev.tau_dot(t) / tau;
    return (eta - tau * tau - 1.0 < 0.0) && falling < 0.0;
}

std::vector<TimeInterval> non_markovian_intervals(const Evolution& ev,
                                                  std::span<const double> grid, double cp_tol) {
    std::vector<TimeInterval> intervals;
    bool in_run = false;
    double run_start = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool bad = !is_markovian_at(ev, grid[i], cp_tol).markovian_at_t;
        if (bad && !in_run) {
            run_start = grid[i];
            in_run = true;
        } else if (!bad && in_run) {
            intervals.push_back({run_start, grid[i]});
            in_run = false;
        }
    }
    if (in_run) intervals.push_back({run_start, grid.back()});
    return intervals;
}

}  // namespace gnm
