// witnesses.hpp — correlation quantifiers used as non-Markovianity
// witnesses: Gaussian steerability, PPT entanglement, and detection of
// backflows (temporal revivals) in sampled witness traces.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gnm/symplectic.hpp"

namespace gnm {

inline constexpr double kBackflowRelTol = 1e-9;

enum class SteeringDirection { a_to_b, b_to_a };

/// Gaussian steerability max{0, -sum_{nu_i < 1} ln nu_i} over the
/// symplectic eigenvalues of the Schur complement (M_B for A->B, M_A for
/// B->A). Natural logarithm (nats). Eigenvalues within 1e-12 of 1 count as
/// exactly on the boundary and contribute nothing.
double steerability(const CovarianceMatrix& cov, const Bipartition& part,
                    SteeringDirection direction = SteeringDirection::a_to_b);

/// PPT entanglement quantifier max{0, -sum_{mu_i < 0} mu_i} over the
/// eigenvalues of sigma + i(Omega_A (+) Omega_B^T). Requires one party to
/// be single-mode (where PPT is also sufficient for separability). The
/// same boundary band as steerability applies at mu = 0.
double entanglement_ppt(const CovarianceMatrix& cov, const Bipartition& part);

/// Sampled time series of a witness value on a strictly increasing grid.
struct WitnessTrace {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;

    WitnessTrace(std::vector<double> times, std::vector<double> values, std::string label);
};

/// Closed time interval [start, end] anchored at grid samples.
struct TimeInterval {
    double start;
    double end;
};

inline bool overlaps(const TimeInterval& x, const TimeInterval& y) {
    return x.start < y.end && y.start < x.end;
}

struct BackflowReport {
    std::vector<TimeInterval> intervals;  // maximal rising intervals, ordered
    double max_rise = 0.0;                // largest rise over a single interval
    double tolerance = 0.0;               // absolute per-step threshold used
};

/// Report every maximal interval over which consecutive samples rise by
/// more than rel_tol * max(1, max(values)). A trace that is non-increasing
/// up to that tolerance yields an empty interval list.
BackflowReport detect_backflows(const WitnessTrace& trace, double rel_tol = kBackflowRelTol);

}  // namespace gnm
