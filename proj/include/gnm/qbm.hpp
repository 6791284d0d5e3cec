// qbm.hpp — quantum Brownian motion of one mode in a thermal bosonic bath:
// Lorentz-Drude spectral density, damping/diffusion coefficient integrals,
// the induced lossy channel (tau(t), eta(t)), and covariance propagation
// through the covariance-matrix master equation with an integrated-form
// cross-check. Units: hbar = k_B = 1.

#pragma once

#include <functional>
#include <vector>

#include "gnm/evolutions.hpp"
#include "gnm/symplectic.hpp"

namespace gnm {

struct QbmParams {
    double alpha;        // system-bath coupling strength
    double omega0;       // oscillator frequency
    double omega_c;      // bath cutoff frequency
    double s = 1.0;      // ohmicity exponent (s < 1 sub-Ohmic, 1 Ohmic, > 1 super-Ohmic)
    double temperature;  // bath temperature

    double quad_rel_tol = 1e-8;
    double ode_rel_tol = 1e-9;
    double cross_tol = 1e-6;         // ODE vs integrated-form agreement
    double omega_max_factor = 50.0;  // frequency-integral truncation multiplier

    // Optional replacement for the Lorentz-Drude J(omega) in the coefficient
    // integrals; used by tests with analytically integrable densities.
    std::function<double(double)> spectral_density_override;

    void validate() const;
};

/// Lorentz-Drude spectral density J(omega) = (2 omega^s / pi) *
/// omega_c^{3-s} / (omega_c^2 + omega^2).
double spectral_density(double omega, const QbmParams& p);

/// Damping and diffusion coefficients with the induced channel parameters,
/// sampled on a shared time grid. Carries the accumulated quadrature error
/// bounds for the coefficient integrals.
struct QbmCoefficients {
    std::vector<double> grid;
    std::vector<double> gamma;  // damping
    std::vector<double> delta;  // diffusion
    std::vector<double> tau;
    std::vector<double> eta;
    std::vector<double> gamma_error_bound;
    std::vector<double> delta_error_bound;
};

/// Coupling-independent time integrals of the damping/diffusion kernels
/// (gamma and delta equal alpha^2 times these). Computing this table once
/// makes coupling sweeps cheap.
struct QbmKernelTable {
    std::vector<double> grid;
    std::vector<double> damping;
    std::vector<double> diffusion;
    std::vector<double> damping_error;
    std::vector<double> diffusion_error;
};

/// Inner frequency integrals times the resonant factor, evaluated at one
/// outer time. Exposed for oracle tests of the nested quadrature.
double damping_kernel(double t, const QbmParams& p);
double diffusion_kernel(double t, const QbmParams& p);

/// Nested-quadrature computation of the kernel table on `grid` (starts at 0,
/// strictly increasing). Segment integrals may run on `threads` workers; the
/// result is independent of the thread count.
QbmKernelTable compute_kernel_table(const QbmParams& p, const std::vector<double>& grid,
                                    int threads = 1);

/// Scale a kernel table by alpha^2 and integrate tau' = -gamma tau / 2,
/// eta' = delta - gamma eta from (1, 0).
QbmCoefficients coefficients_from_kernels(const QbmKernelTable& kernels, const QbmParams& p);

/// Full pipeline: kernel table + coupling scaling + (tau, eta).
QbmCoefficients coefficients(const QbmParams& p, const std::vector<double>& grid,
                             int threads = 1);

/// Propagate sigma0 through d sigma/dt = A sigma + sigma A^T + D with
/// A = (-gamma/2 I) on the target mode and D = (Delta I) there, sampling at
/// the coefficient grid. Every sample is cross-checked against the
/// integrated lossy-channel expression within p.cross_tol
/// (ConsistencyError on divergence).
std::vector<CovarianceMatrix> evolve_covariance(const CovarianceMatrix& sigma0,
                                                const QbmCoefficients& coeffs,
                                                const QbmParams& p, int target_mode = 0);

std::vector<CovarianceMatrix> evolve_covariance(const CovarianceMatrix& sigma0,
                                                const QbmParams& p,
                                                const std::vector<double>& grid,
                                                int target_mode = 0, int threads = 1);

/// Lossy-form Evolution view of the coefficients: tau/eta are cubic Hermite
/// interpolants with master-equation nodal slopes (tau' = -gamma tau / 2,
/// eta' = delta - gamma eta), never numerical differences. Queries outside
/// the grid raise DomainError.
Evolution as_evolution(const QbmCoefficients& coeffs);

}  // namespace gnm
