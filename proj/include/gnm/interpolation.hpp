// interpolation.hpp — natural cubic splines and cubic Hermite interpolation
// on fixed knot grids.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gnm/errors.hpp"

namespace gnm {

namespace detail {

inline std::size_t locate_segment(const std::vector<double>& x, double t) {
    // permit a whisker of roundoff slack at both ends
    const double slack = 1e-9 * (x.back() - x.front()) + 1e-300;
    if (t < x.front() - slack || t > x.back() + slack)
        throw DomainError("interpolation: query " + std::to_string(t) + " outside [" +
                          std::to_string(x.front()) + ", " + std::to_string(x.back()) + "]");
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(x.begin(), it));
    if (i == 0) return 0;
    if (i >= x.size()) return x.size() - 2;
    return i - 1;
}

}  // namespace detail

/// Natural cubic spline (zero second derivative at both ends).
class CubicSpline {
  public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw InvalidDimensionError("CubicSpline: need >= 2 matching knots");
        for (std::size_t i = 1; i < n; ++i)
            if (x_[i] <= x_[i - 1])
                throw InvariantViolationError("CubicSpline: knots must be strictly increasing");

        // Solve the tridiagonal system for the second derivatives (moments).
        m_.assign(n, 0.0);
        if (n > 2) {
            std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2);
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double h0 = x_[i] - x_[i - 1];
                const double h1 = x_[i + 1] - x_[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                upper[i - 1] = h1;
                rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
            }
            for (std::size_t i = 1; i < n - 2; ++i) {
                const double h0 = x_[i + 1] - x_[i];
                const double w = h0 / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            for (std::size_t i = n - 2; i-- > 0;) {
                double v = rhs[i];
                if (i + 1 < n - 2) v -= upper[i] * m_[i + 2];
                m_[i + 1] = v / diag[i];
            }
        }
    }

    double operator()(double t) const {
        const std::size_t i = detail::locate_segment(x_, t);
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - t) / h;
        const double b = (t - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

    double derivative(double t) const {
        const std::size_t i = detail::locate_segment(x_, t);
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - t) / h;
        const double b = (t - x_[i]) / h;
        return (y_[i + 1] - y_[i]) / h +
               ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
    }

    const std::vector<double>& knots() const { return x_; }

  private:
    std::vector<double> x_, y_, m_;
};

/// Cubic Hermite interpolant with prescribed nodal values and derivatives.
class HermiteSpline {
  public:
    HermiteSpline() = default;

    HermiteSpline(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
        : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n || dy_.size() != n)
            throw InvalidDimensionError("HermiteSpline: need >= 2 matching knots");
        for (std::size_t i = 1; i < n; ++i)
            if (x_[i] <= x_[i - 1])
                throw InvariantViolationError("HermiteSpline: knots must be strictly increasing");
    }

    double operator()(double t) const {
        const std::size_t i = detail::locate_segment(x_, t);
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * dy_[i] +
               (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * dy_[i + 1];
    }

    double derivative(double t) const {
        const std::size_t i = detail::locate_segment(x_, t);
        const double h = x_[i + 1] - x_[i];
        const double s = (t - x_[i]) / h;
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * y_[i] + (3 * s2 - 4 * s + 1) * h * dy_[i] +
                (-6 * s2 + 6 * s) * y_[i + 1] + (3 * s2 - 2 * s) * h * dy_[i + 1]) /
               h;
    }

    const std::vector<double>& knots() const { return x_; }

  private:
    std::vector<double> x_, y_, dy_;
};

}  // namespace gnm
