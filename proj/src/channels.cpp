#include "gnm/channels.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <string>

#include "gnm/witnesses.hpp"

namespace gnm {

namespace {

double min_hermitian_eigenvalue(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// N - i T Omega T^T (+ i Omega); Hermitian since T Omega T^T is antisymmetric.
Eigen::MatrixXcd breaking_matrix(const GaussianChannel& ch, bool add_omega) {
    const std::complex<double> im(0.0, 1.0);
    const Matrix omega = symplectic_form(ch.modes);
    Eigen::MatrixXcd h = ch.noise.cast<std::complex<double>>() -
                         im * (ch.transform * omega * ch.transform.transpose())
                                  .cast<std::complex<double>>();
    if (add_omega) h += im * omega.cast<std::complex<double>>();
    return h;
}

bool is_isotropic(const GaussianChannel& ch, double& tau, double& eta) {
    const double t00 = ch.transform(0, 0);
    const double n00 = ch.noise(0, 0);
    const double tol_t = 1e-12 * std::max(1.0, std::abs(t00));
    const double tol_n = 1e-12 * std::max(1.0, std::abs(n00));
    const bool iso = (ch.transform - t00 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= tol_t &&
                     (ch.noise - n00 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= tol_n;
    tau = t00;
    eta = n00;
    return iso;
}

// Mode whose transform block row/column is the identity embedding and whose
// noise block row/column vanishes, i.e. a mode the channel does not act on.
bool has_untouched_mode(const GaussianChannel& ch) {
    for (int j = 0; j < ch.modes; ++j) {
        Matrix t_rows = ch.transform.middleRows(2 * j, 2);
        Matrix t_cols = ch.transform.middleCols(2 * j, 2);
        t_rows.block(0, 2 * j, 2, 2) -= Matrix::Identity(2, 2);
        t_cols.block(2 * j, 0, 2, 2) -= Matrix::Identity(2, 2);
        const double dev = std::max({t_rows.cwiseAbs().maxCoeff(), t_cols.cwiseAbs().maxCoeff(),
                                     ch.noise.middleRows(2 * j, 2).cwiseAbs().maxCoeff(),
                                     ch.noise.middleCols(2 * j, 2).cwiseAbs().maxCoeff()});
        if (dev <= 1e-12) return true;
    }
    return false;
}

}  // namespace

GaussianChannel::GaussianChannel(int modes_, Matrix transform_, Matrix noise_)
    : modes(modes_), transform(std::move(transform_)), noise(std::move(noise_)) {
    if (modes < 1) throw InvalidDimensionError("GaussianChannel: mode count must be >= 1");
    const Eigen::Index d = 2 * modes;
    if (transform.rows() != d || transform.cols() != d || noise.rows() != d || noise.cols() != d)
        throw InvalidDimensionError("GaussianChannel: matrices must be " + std::to_string(d) +
                                    "x" + std::to_string(d));
    if (!transform.allFinite() || !noise.allFinite())
        throw InvariantViolationError("GaussianChannel: non-finite entries");
    if ((noise - noise.transpose()).cwiseAbs().maxCoeff() > kSymTol)
        throw InvariantViolationError("GaussianChannel: noise matrix must be symmetric");
    noise = 0.5 * (noise + noise.transpose());
}

GaussianChannel identity_channel(int modes) {
    const Eigen::Index d = 2 * modes;
    return GaussianChannel(modes, Matrix::Identity(d, d), Matrix::Zero(d, d));
}

GaussianChannel isotropic_channel(double tau, double eta) {
    if (!std::isfinite(tau) || !std::isfinite(eta))
        throw DomainError("isotropic_channel: parameters must be finite");
    return GaussianChannel(1, tau * Matrix::Identity(2, 2), eta * Matrix::Identity(2, 2));
}

CovarianceMatrix apply(const GaussianChannel& ch, const CovarianceMatrix& cov) {
    if (ch.modes != cov.modes())
        throw InvalidDimensionError("apply: channel acts on " + std::to_string(ch.modes) +
                                    " modes, state has " + std::to_string(cov.modes()));
    Matrix out = ch.transform * cov.data() * ch.transform.transpose() + ch.noise;
    return CovarianceMatrix(cov.modes(), 0.5 * (out + out.transpose()));
}

GaussianChannel compose(const GaussianChannel& later, const GaussianChannel& earlier) {
    if (later.modes != earlier.modes)
        throw InvalidDimensionError("compose: mode counts differ");
    Matrix t = later.transform * earlier.transform;
    Matrix n = later.transform * earlier.noise * later.transform.transpose() + later.noise;
    return GaussianChannel(later.modes, std::move(t), 0.5 * (n + n.transpose()));
}

GaussianChannel embed_local(const GaussianChannel& ch, int total_modes, int target_mode) {
    if (ch.modes != 1) throw InvalidDimensionError("embed_local: channel must be single-mode");
    if (target_mode < 0 || target_mode >= total_modes)
        throw IndexError("embed_local: target mode " + std::to_string(target_mode) +
                         " out of range for " + std::to_string(total_modes) + " modes");
    const Eigen::Index d = 2 * total_modes;
    Matrix t = Matrix::Identity(d, d);
    Matrix n = Matrix::Zero(d, d);
    t.block(2 * target_mode, 2 * target_mode, 2, 2) = ch.transform;
    n.block(2 * target_mode, 2 * target_mode, 2, 2) = ch.noise;
    return GaussianChannel(total_modes, std::move(t), std::move(n));
}

GaussianChannel intermediate_map(const GaussianChannel& later, const GaussianChannel& earlier) {
    if (later.modes != earlier.modes)
        throw InvalidDimensionError("intermediate_map: mode counts differ");
    Eigen::JacobiSVD<Matrix> svd(earlier.transform, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    if (smin <= 1e-12 * svd.singularValues().maxCoeff())
        throw NonInvertibleEvolutionError(
            "intermediate_map: earlier transform is singular (sigma_min " + std::to_string(smin) +
            ")");
    // T_{t,s} = T_t T_s^{-1}
    const Matrix inv_earlier =
        svd.solve(Matrix::Identity(earlier.transform.rows(), earlier.transform.cols()));
    Matrix bridge_t = later.transform * inv_earlier;
    Matrix bridge_n = later.noise - bridge_t * earlier.noise * bridge_t.transpose();
    return GaussianChannel(later.modes, std::move(bridge_t),
                           0.5 * (bridge_n + bridge_n.transpose()));
}

bool is_cptp(const GaussianChannel& ch, double tol) {
    return min_hermitian_eigenvalue(breaking_matrix(ch, /*add_omega=*/true)) >= -tol;
}

bool is_cptp_single_mode(const GaussianChannel& ch, double tol) {
    if (ch.modes != 1) throw InvalidDimensionError("is_cptp_single_mode: channel must be single-mode");
    Eigen::SelfAdjointEigenSolver<Matrix> es(ch.noise, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) return false;
    const double dt = ch.transform.determinant();
    return ch.noise.determinant() >= (dt - 1.0) * (dt - 1.0) - tol;
}

bool is_gib(const GaussianChannel& ch, double tol) {
    return min_hermitian_eigenvalue(breaking_matrix(ch, /*add_omega=*/false)) >= -tol;
}

bool is_eb(const GaussianChannel& ch, bool allow_numerical_proxy) {
    if (ch.modes != 1) {
        // A map leaving some mode untouched can never break all entanglement.
        if (has_untouched_mode(ch)) return false;
        throw UnsupportedChannelError(
            "is_eb: only single-mode channels (or local embeddings) are supported");
    }
    double tau = 0.0, eta = 0.0;
    if (is_isotropic(ch, tau, eta)) return eta >= tau * tau + 1.0;
    if (!allow_numerical_proxy)
        throw UnsupportedChannelError("is_eb: non-isotropic channel and proxy path disabled");
    // Probe with a strongly squeezed state; separable output iff EB.
    const CovarianceMatrix probe = two_mode_squeezed(kEbProbeSqueezing);
    const CovarianceMatrix out = apply(embed_local(ch, 2, 0), probe);
    return entanglement_ppt(out, Bipartition{1, 1}) <= kEbTol;
}

}  // namespace gnm
