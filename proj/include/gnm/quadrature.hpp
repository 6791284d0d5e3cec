// quadrature.hpp — adaptive Gauss(7)/Kronrod(15) quadrature with a global
// error budget. Deterministic: the refinement order and the final summation
// order are fixed, independent of platform threading.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "gnm/errors.hpp"

namespace gnm {

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    int intervals = 1;
};

namespace detail {

// Nodes/weights of the 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGk15WeightsK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGk15WeightsG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    std::uint64_t id;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.id > y.id;  // deterministic tie-break: older panel first
    }
};

template <class F>
Panel gk15(F&& f, double a, double b, std::uint64_t id) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[2 * i] = f(mid - half * kGk15Nodes[i]);
        fv[2 * i + 1] = f(mid + half * kGk15Nodes[i]);
    }
    fv[14] = f(mid);

    double kron = kGk15WeightsK[7] * fv[14];
    double resabs = kGk15WeightsK[7] * std::abs(fv[14]);
    for (int i = 0; i < 7; ++i) {
        kron += kGk15WeightsK[i] * (fv[2 * i] + fv[2 * i + 1]);
        resabs += kGk15WeightsK[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
    }
    double gauss = kGk15WeightsG[3] * fv[14];
    for (int i = 0; i < 3; ++i) gauss += kGk15WeightsG[i] * (fv[2 * (2 * i + 1)] + fv[2 * (2 * i + 1) + 1]);

    const double eps = std::numeric_limits<double>::epsilon();
    const double err = std::max(1.5 * std::abs(kron - gauss) * half, 50.0 * eps * resabs * half);
    return Panel{a, b, kron * half, err, id};
}

}  // namespace detail

/// Integrate f over [a, b] until the summed panel error satisfies
/// err <= max(abs_tol, rel_tol * |integral|). Throws AccuracyError (carrying
/// the achieved estimate and bound) when max_intervals panels do not suffice.
/// When `leaves` is given, the final panel decomposition (sorted by left
/// endpoint) is written to it.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_tol = 0.0, int max_intervals = 40000,
                                    std::vector<std::pair<double, double>>* leaves_out = nullptr) {
    if (!(b > a)) {
        if (b == a) return {0.0, 0.0, 0};
        throw DomainError("integrate_adaptive: inverted interval");
    }

    std::uint64_t next_id = 0;
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse> heap;
    heap.push(detail::gk15(f, a, b, next_id++));

    double total_value = heap.top().value;
    double total_error = heap.top().error;
    int panels = 1;

    while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
        if (panels >= max_intervals)
            throw AccuracyError("integrate_adaptive: tolerance not reached with " +
                                    std::to_string(panels) + " panels",
                                total_value, total_error);
        detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw AccuracyError("integrate_adaptive: interval underflow", total_value, total_error);
        detail::Panel left = detail::gk15(f, worst.a, mid, next_id++);
        detail::Panel right = detail::gk15(f, mid, worst.b, next_id++);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Deterministic final summation: leaves ordered by left endpoint.
    std::vector<detail::Panel> leaves;
    leaves.reserve(static_cast<std::size_t>(panels));
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    std::sort(leaves.begin(), leaves.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    double value = 0.0, error = 0.0;
    for (const auto& p : leaves) {
        value += p.value;
        error += p.error;
    }
    if (leaves_out) {
        leaves_out->clear();
        for (const auto& p : leaves) leaves_out->emplace_back(p.a, p.b);
    }
    return {value, error, panels};
}

}  // namespace gnm
