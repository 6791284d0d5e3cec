#include "gnm/qbm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "gnm/interpolation.hpp"
#include "gnm/ode.hpp"
#include "gnm/quadrature.hpp"
#include "gnm/util.hpp"

namespace gnm {

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

double omega_cutoff(const QbmParams& p) {
    return p.omega_max_factor * std::max({p.omega_c, p.omega0, p.temperature});
}

double bath_density(double omega, const QbmParams& p) {
    return p.spectral_density_override ? p.spectral_density_override(omega)
                                       : spectral_density(omega, p);
}

// J(omega) coth(omega / 2T); the omega -> 0 limit behaves as
// (4T/pi) omega^{s-1} omega_c^{1-s}, finite for s >= 1.
double diffusion_envelope(double omega, const QbmParams& p) {
    if (omega == 0.0) {
        if (p.spectral_density_override) return 0.0;  // hook densities must vanish at 0
        if (p.s > 1.0) return 0.0;
        if (p.s == 1.0) return 4.0 * p.temperature / M_PI;
        return std::numeric_limits<double>::infinity();  // integrable endpoint, never sampled
    }
    return bath_density(omega, p) * coth(omega / (2.0 * p.temperature));
}

void check_grid(const std::vector<double>& grid, const char* who) {
    if (grid.size() < 2) throw DomainError(std::string(who) + ": grid needs >= 2 samples");
    if (grid.front() != 0.0) throw DomainError(std::string(who) + ": grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw DomainError(std::string(who) + ": grid must be strictly increasing");
}

// Cached trigonometric-transform quadrature for int_0^Omega E(w) cos(w t) dw
// (and the sine transform). The envelope E is t-independent, so its panel
// decomposition and node values are computed once: a low-frequency region
// captured from one adaptive run, then uniform panels kept under one
// oscillation period at the largest t of interest. Every evaluation still
// produces a Gauss/Kronrod error estimate; if it misses the requested
// tolerance the caller's slow adaptive path takes over.
class OscTransformQuad {
  public:
    enum class Kind { cosine, sine };

    OscTransformQuad(const std::function<double(double)>& envelope, double omega_max,
                     double t_max, double envelope_scale_length, double build_rel_tol) {
        const double fine_end = std::min(omega_max, 50.0 * envelope_scale_length);
        const double t_ref = std::max(t_max, 1e-6);

        std::vector<std::pair<double, double>> captured;
        integrate_adaptive([&](double w) { return envelope(w) * std::cos(w * t_ref); }, 0.0,
                           fine_end, build_rel_tol, 0.0, 40000, &captured);

        // Panels must stay well under one oscillation period at the largest
        // t, otherwise the Gauss/Kronrod gap cannot certify the tolerance.
        const double max_width = 0.6 * 2.0 * M_PI / t_ref;
        for (const auto& [a, b] : captured) {
            const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
            for (int k = 0; k < pieces; ++k) {
                const double lo = a + (b - a) * k / pieces;
                const double hi = a + (b - a) * (k + 1) / pieces;
                fine_.push_back(make_node_panel(envelope, lo, hi));
            }
        }

        if (fine_end < omega_max) {
            uniform_start_ = fine_end;
            const double span = omega_max - fine_end;
            double width = std::min(max_width, span / 4.0);
            uniform_count_ = static_cast<int>(std::ceil(span / width));
            uniform_width_ = span / uniform_count_;
            uniform_.reserve(static_cast<std::size_t>(uniform_count_));
            for (int p = 0; p < uniform_count_; ++p)
                uniform_.push_back(make_pair_panel(envelope, uniform_start_ + p * uniform_width_,
                                                   uniform_start_ + (p + 1) * uniform_width_));
        }
    }

    // value + error bound of the requested transform at t
    std::pair<double, double> eval(double t, Kind kind) const {
        double value = 0.0, err = 0.0;

        for (const auto& panel : fine_) {
            double kron = 0.0, gauss = 0.0;
            for (int j = 0; j < 15; ++j) {
                const double osc = kind == Kind::cosine ? std::cos(panel.omega[j] * t)
                                                        : std::sin(panel.omega[j] * t);
                kron += panel.wk[j] * osc;
                gauss += panel.wg[j] * osc;
            }
            value += kron;
            err += 1.5 * std::abs(kron - gauss);
        }

        if (uniform_count_ > 0) {
            const double half = 0.5 * uniform_width_;
            double cd[8], sd[8];
            for (int i = 0; i < 7; ++i) {
                cd[i] = std::cos(half * detail::kGk15Nodes[i] * t);
                sd[i] = std::sin(half * detail::kGk15Nodes[i] * t);
            }
            cd[7] = 1.0;
            sd[7] = 0.0;

            const double cw = std::cos(uniform_width_ * t);
            const double sw = std::sin(uniform_width_ * t);
            double cm = 0.0, sm = 0.0;
            for (int p = 0; p < uniform_count_; ++p) {
                if (p % 128 == 0) {  // periodic restart limits recurrence drift
                    const double m = (uniform_start_ + (p + 0.5) * uniform_width_) * t;
                    cm = std::cos(m);
                    sm = std::sin(m);
                }
                const UniformPanel& u = uniform_[static_cast<std::size_t>(p)];
                double sa = u.a_kron[7], sb = 0.0, sa_g = u.a_gauss[3], sb_g = 0.0;
                for (int i = 0; i < 7; ++i) {
                    sa += u.a_kron[i] * cd[i];
                    sb += u.b_kron[i] * sd[i];
                }
                for (int i = 0; i < 3; ++i) {
                    const int node = 2 * i + 1;
                    sa_g += u.a_gauss[i] * cd[node];
                    sb_g += u.b_gauss[i] * sd[node];
                }
                double kron, gauss;
                if (kind == Kind::cosine) {
                    kron = cm * sa + sm * sb;
                    gauss = cm * sa_g + sm * sb_g;
                } else {
                    kron = sm * sa - cm * sb;
                    gauss = sm * sa_g - cm * sb_g;
                }
                value += kron;
                err += 1.5 * std::abs(kron - gauss);

                const double cm_next = cm * cw - sm * sw;
                sm = sm * cw + cm * sw;
                cm = cm_next;
            }
        }
        return {value, err};
    }

  private:
    struct NodePanel {
        std::array<double, 15> omega, wk, wg;
    };
    // symmetric node pairs collapsed: a = w(E- + E+), b = w(E- - E+)
    struct UniformPanel {
        std::array<double, 8> a_kron;  // 7 pairs + centre
        std::array<double, 7> b_kron;
        std::array<double, 4> a_gauss;  // pairs 1,3,5 + centre
        std::array<double, 3> b_gauss;
    };

    static NodePanel make_node_panel(const std::function<double(double)>& envelope, double a,
                                     double b) {
        NodePanel panel{};
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (int i = 0; i < 7; ++i) {
            panel.omega[2 * i] = mid - half * detail::kGk15Nodes[i];
            panel.omega[2 * i + 1] = mid + half * detail::kGk15Nodes[i];
            const double wk = detail::kGk15WeightsK[i] * half;
            panel.wk[2 * i] = wk * envelope(panel.omega[2 * i]);
            panel.wk[2 * i + 1] = wk * envelope(panel.omega[2 * i + 1]);
        }
        panel.omega[14] = mid;
        panel.wk[14] = detail::kGk15WeightsK[7] * half * envelope(mid);
        for (int i = 0; i < 3; ++i) {
            const int node = 2 * (2 * i + 1);
            const double wg = detail::kGk15WeightsG[i] * half;
            panel.wg[node] = wg * envelope(panel.omega[node]) ;
            panel.wg[node + 1] = wg * envelope(panel.omega[node + 1]);
        }
        panel.wg[14] = detail::kGk15WeightsG[3] * half * envelope(mid);
        return panel;
    }

    static UniformPanel make_pair_panel(const std::function<double(double)>& envelope, double a,
                                        double b) {
        UniformPanel u{};
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double e_lo[7], e_hi[7];
        for (int i = 0; i < 7; ++i) {
            e_lo[i] = envelope(mid - half * detail::kGk15Nodes[i]);
            e_hi[i] = envelope(mid + half * detail::kGk15Nodes[i]);
            const double wk = detail::kGk15WeightsK[i] * half;
            u.a_kron[i] = wk * (e_lo[i] + e_hi[i]);
            u.b_kron[i] = wk * (e_lo[i] - e_hi[i]);
        }
        const double e_mid = envelope(mid);
        u.a_kron[7] = detail::kGk15WeightsK[7] * half * e_mid;
        for (int i = 0; i < 3; ++i) {
            const int node = 2 * i + 1;
            const double wg = detail::kGk15WeightsG[i] * half;
            u.a_gauss[i] = wg * (e_lo[node] + e_hi[node]);
            u.b_gauss[i] = wg * (e_lo[node] - e_hi[node]);
        }
        u.a_gauss[3] = detail::kGk15WeightsG[3] * half * e_mid;
        return u;
    }

    std::vector<NodePanel> fine_;
    std::vector<UniformPanel> uniform_;
    double uniform_start_ = 0.0;
    double uniform_width_ = 0.0;
    int uniform_count_ = 0;
};

double max_spacing(const std::vector<double>& grid) {
    double h = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) h = std::max(h, grid[i] - grid[i - 1]);
    return h;
}

struct CoefficientSplines {
    CubicSpline gamma;
    CubicSpline delta;
};

CoefficientSplines make_splines(const QbmCoefficients& coeffs) {
    return {CubicSpline(coeffs.grid, coeffs.gamma), CubicSpline(coeffs.grid, coeffs.delta)};
}

}  // namespace

void QbmParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(alpha) || !positive(omega0) || !positive(omega_c) || !positive(s) ||
        !positive(temperature))
        throw DomainError("QbmParams: alpha, omega0, omega_c, s, temperature must be positive");
    if (!positive(quad_rel_tol) || !positive(ode_rel_tol) || !positive(cross_tol) ||
        !positive(omega_max_factor))
        throw DomainError("QbmParams: tolerances and omega_max_factor must be positive");
}

double spectral_density(double omega, const QbmParams& p) {
    if (omega < 0.0) throw DomainError("spectral_density: omega must be >= 0");
    return (2.0 * std::pow(omega, p.s) / M_PI) * std::pow(p.omega_c, 3.0 - p.s) /
           (p.omega_c * p.omega_c + omega * omega);
}

double damping_kernel(double t, const QbmParams& p) {
    const double resonance = std::sin(p.omega0 * t);
    if (resonance == 0.0) return 0.0;
    const auto integrand = [&](double omega) {
        return bath_density(omega, p) * std::sin(omega * t);
    };
    const auto inner = integrate_adaptive(integrand, 0.0, omega_cutoff(p),
                                          p.quad_rel_tol * 1e-2, 1e-14);
    return resonance * inner.value;
}

double diffusion_kernel(double t, const QbmParams& p) {
    const double resonance = std::cos(p.omega0 * t);
    if (resonance == 0.0) return 0.0;
    const auto integrand = [&](double omega) {
        return diffusion_envelope(omega, p) * std::cos(omega * t);
    };
    const auto inner = integrate_adaptive(integrand, 0.0, omega_cutoff(p),
                                          p.quad_rel_tol * 1e-2, 1e-14 * (1.0 + p.temperature));
    return resonance * inner.value;
}

// Cached-transform front ends for the kernel table; every evaluation checks
// its own error estimate and falls back to the direct adaptive route when
// the cached panels do not reach the tolerance.
struct KernelEvaluators {
    const QbmParams& p;
    OscTransformQuad damping_quad;
    OscTransformQuad diffusion_quad;

    KernelEvaluators(const QbmParams& params, double t_max)
        : p(params),
          damping_quad([&params](double w) { return bath_density(w, params); }, omega_cutoff(params),
                       t_max, params.omega_c, params.quad_rel_tol * 1e-3),
          diffusion_quad([&params](double w) { return diffusion_envelope(w, params); },
                         omega_cutoff(params), t_max, params.omega_c,
                         params.quad_rel_tol * 1e-3) {}

    double damping(double t) const {
        const double resonance = std::sin(p.omega0 * t);
        if (resonance == 0.0) return 0.0;
        const auto [value, err] = damping_quad.eval(t, OscTransformQuad::Kind::sine);
        if (err > std::max(1e-12, p.quad_rel_tol * 1e-2 * std::abs(value)))
            return damping_kernel(t, p);
        return resonance * value;
    }

    double diffusion(double t) const {
        const double resonance = std::cos(p.omega0 * t);
        if (resonance == 0.0) return 0.0;
        const auto [value, err] = diffusion_quad.eval(t, OscTransformQuad::Kind::cosine);
        if (err > std::max(1e-12 * (1.0 + p.temperature), p.quad_rel_tol * 1e-2 * std::abs(value)))
            return diffusion_kernel(t, p);
        return resonance * value;
    }
};

QbmKernelTable compute_kernel_table(const QbmParams& p, const std::vector<double>& grid,
                                    int threads) {
    p.validate();
    check_grid(grid, "compute_kernel_table");
    const int segments = static_cast<int>(grid.size()) - 1;

    const KernelEvaluators kernels(p, grid.back());

    // Rough kernel scale for the absolute part of the segment tolerance.
    double scale_d = 1.0, scale_f = 1.0;
    for (int i = 1; i <= 8; ++i) {
        const double t = grid.back() * i / 8.0;
        scale_d = std::max(scale_d, std::abs(kernels.damping(t)));
        scale_f = std::max(scale_f, std::abs(kernels.diffusion(t)));
    }

    std::vector<double> damping_inc(segments), diffusion_inc(segments);
    std::vector<double> damping_err(segments), diffusion_err(segments);
    parallel_for(segments, threads, [&](int k) {
        const double a = grid[static_cast<std::size_t>(k)];
        const double b = grid[static_cast<std::size_t>(k) + 1];
        const double h = b - a;
        const auto gd = integrate_adaptive([&](double t) { return kernels.damping(t); }, a, b,
                                           p.quad_rel_tol, p.quad_rel_tol * h * scale_d, 2000);
        const auto fd = integrate_adaptive([&](double t) { return kernels.diffusion(t); }, a, b,
                                           p.quad_rel_tol, p.quad_rel_tol * h * scale_f, 2000);
        damping_inc[static_cast<std::size_t>(k)] = gd.value;
        damping_err[static_cast<std::size_t>(k)] = gd.error_bound;
        diffusion_inc[static_cast<std::size_t>(k)] = fd.value;
        diffusion_err[static_cast<std::size_t>(k)] = fd.error_bound;
    });

    QbmKernelTable table;
    table.grid = grid;
    table.damping.assign(grid.size(), 0.0);
    table.diffusion.assign(grid.size(), 0.0);
    table.damping_error.assign(grid.size(), 0.0);
    table.diffusion_error.assign(grid.size(), 0.0);
    for (int k = 0; k < segments; ++k) {
        const auto i = static_cast<std::size_t>(k);
        table.damping[i + 1] = table.damping[i] + damping_inc[i];
        table.diffusion[i + 1] = table.diffusion[i] + diffusion_inc[i];
        table.damping_error[i + 1] = table.damping_error[i] + damping_err[i];
        table.diffusion_error[i + 1] = table.diffusion_error[i] + diffusion_err[i];
    }
    return table;
}

QbmCoefficients coefficients_from_kernels(const QbmKernelTable& kernels, const QbmParams& p) {
    p.validate();
    const double a2 = p.alpha * p.alpha;

    QbmCoefficients coeffs;
    coeffs.grid = kernels.grid;
    const std::size_t n = kernels.grid.size();
    coeffs.gamma.resize(n);
    coeffs.delta.resize(n);
    coeffs.gamma_error_bound.resize(n);
    coeffs.delta_error_bound.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        coeffs.gamma[i] = a2 * kernels.damping[i];
        coeffs.delta[i] = a2 * kernels.diffusion[i];
        coeffs.gamma_error_bound[i] = a2 * kernels.damping_error[i];
        coeffs.delta_error_bound[i] = a2 * kernels.diffusion_error[i];
        if (!std::isfinite(coeffs.gamma[i]) || !std::isfinite(coeffs.delta[i]))
            throw InvariantViolationError("coefficients: non-finite coefficient sample");
    }

    // tau(t) = exp(-int gamma/2), eta(t) = tau^2 int delta / tau^2, solved in
    // derivative form so the channel parameters stay consistent with the
    // covariance master equation.
    const CubicSpline gamma_s(coeffs.grid, coeffs.gamma);
    const CubicSpline delta_s(coeffs.grid, coeffs.delta);
    Eigen::VectorXd y0(2);
    y0 << 1.0, 0.0;
    const auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
        const double g = gamma_s(t);
        dydt(0) = -0.5 * g * y(0);
        dydt(1) = delta_s(t) - g * y(1);
    };
    const auto path = integrate_on_grid(rhs, y0, coeffs.grid, p.ode_rel_tol, 1e-12,
                                        2.0 * max_spacing(coeffs.grid));
    coeffs.tau.resize(n);
    coeffs.eta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        coeffs.tau[i] = path[i](0);
        coeffs.eta[i] = path[i](1);
    }
    return coeffs;
}

QbmCoefficients coefficients(const QbmParams& p, const std::vector<double>& grid, int threads) {
    return coefficients_from_kernels(compute_kernel_table(p, grid, threads), p);
}

std::vector<CovarianceMatrix> evolve_covariance(const CovarianceMatrix& sigma0,
                                                const QbmCoefficients& coeffs,
                                                const QbmParams& p, int target_mode) {
    p.validate();
    check_grid(coeffs.grid, "evolve_covariance");
    const int n_modes = sigma0.modes();
    if (target_mode < 0 || target_mode >= n_modes)
        throw IndexError("evolve_covariance: target mode out of range");

    const auto splines = make_splines(coeffs);
    const Eigen::Index d = sigma0.dim();
    const Eigen::Index q = 2 * target_mode;

    Eigen::VectorXd y0 = Eigen::Map<const Eigen::VectorXd>(sigma0.data().data(), d * d);
    const auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
        const double g = splines.gamma(t);
        const double dl = splines.delta(t);
        Eigen::Map<const Eigen::MatrixXd> sig(y.data(), d, d);
        Eigen::Map<Eigen::MatrixXd> out(dydt.data(), d, d);
        out.setZero();
        out.middleRows(q, 2) -= 0.5 * g * sig.middleRows(q, 2);
        out.middleCols(q, 2) -= 0.5 * g * sig.middleCols(q, 2);
        out(q, q) += dl;
        out(q + 1, q + 1) += dl;
    };

    const auto path = integrate_on_grid(rhs, y0, coeffs.grid, p.ode_rel_tol, 1e-12,
                                        2.0 * max_spacing(coeffs.grid));

    std::vector<CovarianceMatrix> result;
    result.reserve(coeffs.grid.size());
    for (std::size_t i = 0; i < coeffs.grid.size(); ++i) {
        Matrix sig = Eigen::Map<const Eigen::MatrixXd>(path[i].data(), d, d);
        sig = 0.5 * (sig + sig.transpose());

        // independent route: integrated lossy-channel expression
        Matrix expected = sigma0.data();
        expected.middleRows(q, 2) *= coeffs.tau[i];
        expected.middleCols(q, 2) *= coeffs.tau[i];
        expected(q, q) += coeffs.eta[i];
        expected(q + 1, q + 1) += coeffs.eta[i];

        const double dev = (sig - expected).cwiseAbs().maxCoeff();
        if (dev > p.cross_tol)
            throw ConsistencyError(
                "evolve_covariance: master-equation and integrated-form routes disagree by " +
                std::to_string(dev) + " at t = " + std::to_string(coeffs.grid[i]));
        result.emplace_back(n_modes, std::move(sig));
    }
    return result;
}

std::vector<CovarianceMatrix> evolve_covariance(const CovarianceMatrix& sigma0,
                                                const QbmParams& p,
                                                const std::vector<double>& grid, int target_mode,
                                                int threads) {
    return evolve_covariance(sigma0, coefficients(p, grid, threads), p, target_mode);
}

Evolution as_evolution(const QbmCoefficients& coeffs) {
    check_grid(coeffs.grid, "as_evolution");
    const std::size_t n = coeffs.grid.size();
    if (coeffs.gamma.size() != n || coeffs.delta.size() != n || coeffs.tau.size() != n ||
        coeffs.eta.size() != n)
        throw InvalidDimensionError("as_evolution: ragged coefficient table");

    struct Bundle {
        CubicSpline gamma, delta;
        HermiteSpline tau, eta;
    };
    std::vector<double> tau_slope(n), eta_slope(n);
    for (std::size_t i = 0; i < n; ++i) {
        tau_slope[i] = -0.5 * coeffs.gamma[i] * coeffs.tau[i];
        eta_slope[i] = coeffs.delta[i] - coeffs.gamma[i] * coeffs.eta[i];
    }
    auto b = std::make_shared<Bundle>(
        Bundle{CubicSpline(coeffs.grid, coeffs.gamma), CubicSpline(coeffs.grid, coeffs.delta),
               HermiteSpline(coeffs.grid, coeffs.tau, tau_slope),
               HermiteSpline(coeffs.grid, coeffs.eta, eta_slope)});

    return make_lossy([b](double t) { return b->tau(t); },
                      [b](double t) { return -0.5 * b->gamma(t) * b->tau(t); },
                      [b](double t) { return b->eta(t); },
                      [b](double t) { return b->delta(t) - b->gamma(t) * b->eta(t); },
                      coeffs.grid.back());
}

}  // namespace gnm
