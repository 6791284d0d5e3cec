#include <doctest.h>

#include <cmath>

#include "gnm/interpolation.hpp"
#include "gnm/ode.hpp"
#include "gnm/quadrature.hpp"
#include "gnm/util.hpp"

using namespace gnm;

TEST_CASE("adaptive quadrature") {
    SUBCASE("smooth integrands") {
        const auto sine = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI,
                                             1e-12, 1e-14);
        CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-12));
        const auto expo =
            integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12, 1e-14);
        CHECK(expo.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
        CHECK(expo.error_bound < 1e-10);
    }

    SUBCASE("oscillatory integrand") {
        // int_0^{20 pi} x sin(50 x) dx = -20 pi cos(1000 pi) / 50
        const double want = -20.0 * M_PI / 50.0;
        const auto osc = integrate_adaptive([](double x) { return x * std::sin(50.0 * x); }, 0.0,
                                            20.0 * M_PI, 1e-10, 1e-12);
        CHECK(osc.value == doctest::Approx(want).epsilon(1e-9));
        CHECK(osc.intervals > 50);
    }

    SUBCASE("empty and inverted ranges") {
        CHECK(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0, 1e-10).value == 0.0);
        CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 2.0, 1.0, 1e-10),
                        DomainError);
    }

    SUBCASE("panel budget exhaustion raises with the best estimate") {
        const auto nasty = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); };
        try {
            integrate_adaptive(nasty, 0.0, 1.0, 1e-14, 0.0, 8);
            FAIL("expected AccuracyError");
        } catch (const AccuracyError& e) {
            CHECK(e.estimate > 1.0);   // true value is 2(sqrt(0.3) + sqrt(0.7)) ~ 2.77
            CHECK(e.error_bound > 0.0);
        }
    }
}

TEST_CASE("Dormand-Prince integrator") {
    SUBCASE("exponential decay with dense output") {
        const auto grid = linspace(0.0, 5.0, 101);
        Eigen::VectorXd y0(1);
        y0 << 1.0;
        const auto sol = integrate_on_grid(
            [](double, const Eigen::VectorXd& y, Eigen::VectorXd& d) { d(0) = -y(0); }, y0, grid,
            1e-10, 1e-12);
        REQUIRE(sol.size() == grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(sol[i](0) == doctest::Approx(std::exp(-grid[i])).epsilon(1e-8));
    }

    SUBCASE("harmonic oscillator stays on the energy shell") {
        const auto grid = linspace(0.0, 20.0, 41);
        Eigen::VectorXd y0(2);
        y0 << 1.0, 0.0;
        const double w = 3.0;
        const auto sol = integrate_on_grid(
            [w](double, const Eigen::VectorXd& y, Eigen::VectorXd& d) {
                d(0) = y(1);
                d(1) = -w * w * y(0);
            },
            y0, grid, 1e-10, 1e-12);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double energy = w * w * sol[i](0) * sol[i](0) + sol[i](1) * sol[i](1);
            CHECK(energy == doctest::Approx(w * w).epsilon(1e-7));
            CHECK(sol[i](0) == doctest::Approx(std::cos(w * grid[i])).epsilon(5e-7));
        }
    }

    SUBCASE("bad right-hand side raises") {
        Eigen::VectorXd y0(1);
        y0 << 1.0;
        CHECK_THROWS_AS(
            integrate_on_grid([](double, const Eigen::VectorXd&,
                                 Eigen::VectorXd& d) { d(0) = std::nan(""); },
                              y0, linspace(0.0, 1.0, 5), 1e-9),
            IntegrationError);
    }
}

TEST_CASE("cubic interpolation") {
    SUBCASE("natural spline approximates a smooth function") {
        const auto x = linspace(0.0, 2.0 * M_PI, 60);
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::sin(x[i]);
        const CubicSpline s(x, y);
        for (double t = 0.2; t < 2.0 * M_PI; t += 0.31) {
            CHECK(s(t) == doctest::Approx(std::sin(t)).epsilon(1e-5));
            CHECK(s.derivative(t) == doctest::Approx(std::cos(t)).epsilon(1e-3));
        }
        CHECK(s(x[17]) == doctest::Approx(y[17]).epsilon(1e-14));  // interpolates nodes
        CHECK_THROWS_AS(s(-1.0), DomainError);
        CHECK_THROWS_AS(s(10.0), DomainError);
    }

    SUBCASE("Hermite interpolation reproduces cubics exactly") {
        const auto cubic = [](double t) { return 2.0 + t - 0.5 * t * t + 0.25 * t * t * t; };
        const auto dcubic = [](double t) { return 1.0 - t + 0.75 * t * t; };
        const auto x = linspace(0.0, 4.0, 5);
        std::vector<double> y(x.size()), dy(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = cubic(x[i]);
            dy[i] = dcubic(x[i]);
        }
        const HermiteSpline h(x, y, dy);
        for (double t = 0.0; t <= 4.0; t += 0.17) {
            CHECK(h(t) == doctest::Approx(cubic(t)).epsilon(1e-13));
            CHECK(h.derivative(t) == doctest::Approx(dcubic(t)).epsilon(1e-11));
        }
    }
}
