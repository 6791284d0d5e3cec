#include "gnm/witnesses.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

namespace gnm {

// eigenvalues this close to the steerability/separability boundary count as
// exactly on it, so solver roundoff cannot leak into the quantifiers
constexpr double kBoundaryTol = 1e-12;

double steerability(const CovarianceMatrix& cov, const Bipartition& part,
                    SteeringDirection direction) {
    const SchurSide side =
        direction == SteeringDirection::a_to_b ? SchurSide::of_b : SchurSide::of_a;
    const Matrix m = schur_complement(cov, part, side);
    double sum = 0.0;
    for (double nu : symplectic_eigenvalues(m)) {
        if (nu < 1.0 - kBoundaryTol) sum -= std::log(nu);
    }
    return std::max(0.0, sum);
}

double entanglement_ppt(const CovarianceMatrix& cov, const Bipartition& part) {
    cov.check_bipartition(part);
    if (part.n_a != 1 && part.n_b != 1)
        throw UnsupportedPartitionError(
            "entanglement_ppt: PPT is conclusive only when one party is single-mode");
    const std::complex<double> im(0.0, 1.0);
    Eigen::MatrixXcd h = cov.data().cast<std::complex<double>>();
    h.topLeftCorner(2 * part.n_a, 2 * part.n_a) +=
        im * symplectic_form(part.n_a).cast<std::complex<double>>();
    h.bottomRightCorner(2 * part.n_b, 2 * part.n_b) -=
        im * symplectic_form(part.n_b).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const double floor = kBoundaryTol * std::max(1.0, cov.data().cwiseAbs().maxCoeff());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double mu = es.eigenvalues()(i);
        if (mu < -floor) sum -= mu;
    }
    return std::max(0.0, sum);
}

WitnessTrace::WitnessTrace(std::vector<double> times_, std::vector<double> values_,
                           std::string label_)
    : times(std::move(times_)), values(std::move(values_)), label(std::move(label_)) {
    if (times.size() != values.size())
        throw InvariantViolationError("WitnessTrace: times/values length mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
            throw InvariantViolationError("WitnessTrace: non-finite sample");
        if (values[i] < 0.0)
            throw InvariantViolationError("WitnessTrace: negative witness value");
        if (i > 0 && times[i] <= times[i - 1])
            throw InvariantViolationError("WitnessTrace: times must be strictly increasing");
    }
}

BackflowReport detect_backflows(const WitnessTrace& trace, double rel_tol) {
    if (trace.times.size() < 2)
        throw InsufficientDataError("detect_backflows: need at least 2 samples");

    const double peak = *std::max_element(trace.values.begin(), trace.values.end());
    const double threshold = rel_tol * std::max(1.0, peak);

    BackflowReport report;
    report.tolerance = threshold;

    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t i = 0; i + 1 < trace.times.size(); ++i) {
        const bool rising = trace.values[i + 1] - trace.values[i] > threshold;
        if (rising && !in_run) {
            run_start = i;
            in_run = true;
        } else if (!rising && in_run) {
            report.intervals.push_back({trace.times[run_start], trace.times[i]});
            report.max_rise = std::max(report.max_rise, trace.values[i] - trace.values[run_start]);
            in_run = false;
        }
    }
    if (in_run) {
        const std::size_t last = trace.times.size() - 1;
        report.intervals.push_back({trace.times[run_start], trace.times[last]});
        report.max_rise = std::max(report.max_rise, trace.values[last] - trace.values[run_start]);
    }
    return report;
}

}  // namespace gnm
