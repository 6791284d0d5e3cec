#include "gnm/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace gnm {

namespace {

void check_symmetry(const Matrix& m, const char* who) {
    if (m.rows() != m.cols())
        throw InvalidDimensionError(std::string(who) + ": matrix not square");
    const double skew = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (skew > kSymTol)
        throw InvariantViolationError(std::string(who) + ": matrix not symmetric (max skew " +
                                      std::to_string(skew) + ")");
}

double min_hermitian_eigenvalue(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(int modes, Matrix data) : modes_(modes) {
    if (modes < 1) throw InvalidDimensionError("CovarianceMatrix: mode count must be >= 1");
    if (data.rows() != 2 * modes || data.cols() != 2 * modes)
        throw InvalidDimensionError("CovarianceMatrix: expected side " +
                                    std::to_string(2 * modes) + ", got " +
                                    std::to_string(data.rows()) + "x" + std::to_string(data.cols()));
    check_symmetry(data, "CovarianceMatrix");
    // exact symmetrization so downstream block algebra never sees skew
    data_ = 0.5 * (data + data.transpose());
}

CovarianceMatrix CovarianceMatrix::validated(int modes, Matrix data, double psd_tol) {
    CovarianceMatrix cov(modes, std::move(data));
    if (!is_physical(cov, psd_tol))
        throw InvariantViolationError("CovarianceMatrix: uncertainty principle violated");
    return cov;
}

void CovarianceMatrix::check_bipartition(const Bipartition& part) const {
    if (part.n_a < 1 || part.n_b < 1 || part.n_a + part.n_b != modes_)
        throw InvalidDimensionError("Bipartition: n_a + n_b must equal the mode count");
}

Matrix CovarianceMatrix::block_a(const Bipartition& part) const {
    check_bipartition(part);
    return data_.topLeftCorner(2 * part.n_a, 2 * part.n_a);
}

Matrix CovarianceMatrix::block_b(const Bipartition& part) const {
    check_bipartition(part);
    return data_.bottomRightCorner(2 * part.n_b, 2 * part.n_b);
}

Matrix CovarianceMatrix::block_c(const Bipartition& part) const {
    check_bipartition(part);
    return data_.topRightCorner(2 * part.n_a, 2 * part.n_b);
}

Matrix symplectic_form(int n) {
    if (n < 1) throw InvalidDimensionError("symplectic_form: n must be >= 1");
    Matrix omega = Matrix::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

bool is_physical(const Matrix& m, double tol) {
    check_symmetry(m, "is_physical");
    if (m.rows() % 2 != 0) throw InvalidDimensionError("is_physical: odd dimension");
    const int n = static_cast<int>(m.rows()) / 2;
    const std::complex<double> im(0.0, 1.0);
    Eigen::MatrixXcd h = m.cast<std::complex<double>>() + im * symplectic_form(n);
    return min_hermitian_eigenvalue(h) >= -tol;
}

bool is_physical(const CovarianceMatrix& cov, double tol) { return is_physical(cov.data(), tol); }

CovarianceMatrix two_mode_squeezed(double r) {
    if (!std::isfinite(r) || r < 0.0)
        throw DomainError("two_mode_squeezed: squeezing must be finite and >= 0");
    const double c = std::cosh(2.0 * r);
    const double s = std::sinh(2.0 * r);
    Matrix m = Matrix::Zero(4, 4);
    m.diagonal() << c, c, c, c;
    m(0, 2) = s;
    m(1, 3) = -s;
    m(2, 0) = s;
    m(3, 1) = -s;
    return CovarianceMatrix::validated(2, std::move(m));
}

CovarianceMatrix ghz_w_state(double r) {
    if (!std::isfinite(r) || r < 0.0)
        throw DomainError("ghz_w_state: squeezing must be finite and >= 0");
    const double e2r = std::exp(2.0 * r);
    const double em2r = std::exp(-2.0 * r);
    const double dq = (e2r + 2.0 * em2r) / 3.0;
    const double dp = (em2r + 2.0 * e2r) / 3.0;
    const double eps = (2.0 / 3.0) * std::sinh(2.0 * r);
    Matrix m = Matrix::Zero(6, 6);
    for (int i = 0; i < 3; ++i) {
        m(2 * i, 2 * i) = dq;
        m(2 * i + 1, 2 * i + 1) = dp;
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            m(2 * i, 2 * j) = eps;
            m(2 * i + 1, 2 * j + 1) = -eps;
        }
    }
    return CovarianceMatrix::validated(3, std::move(m));
}

Matrix schur_complement(const CovarianceMatrix& cov, const Bipartition& part, SchurSide side) {
    const Matrix a = cov.block_a(part);
    const Matrix b = cov.block_b(part);
    const Matrix c = cov.block_c(part);

    const Matrix& inverted = (side == SchurSide::of_b) ? a : b;
    Eigen::JacobiSVD<Matrix> svd(inverted, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double guard = 1e-12 * svd.singularValues().maxCoeff();
    if (smin <= guard)
        throw SingularBlockError("schur_complement: near-singular block (sigma_min " +
                                     std::to_string(smin) + ")",
                                 smin);

    Matrix result;
    if (side == SchurSide::of_b) {
        result = b - c.transpose() * svd.solve(c);
    } else {
        result = a - c * svd.solve(c.transpose());
    }
    return 0.5 * (result + result.transpose());
}

std::vector<double> symplectic_eigenvalues(const Matrix& m, double pair_tol) {
    check_symmetry(m, "symplectic_eigenvalues");
    if (m.rows() % 2 != 0 || m.rows() < 2)
        throw InvalidDimensionError("symplectic_eigenvalues: dimension must be even and >= 2");
    const int nm = static_cast<int>(m.rows()) / 2;

    const std::complex<double> im(0.0, 1.0);
    Eigen::MatrixXcd k = im * (symplectic_form(nm) * m).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(k, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw DegeneracyError("symplectic_eigenvalues: eigensolver failed");

    std::vector<double> mags(2 * nm);
    for (int i = 0; i < 2 * nm; ++i) mags[i] = std::abs(es.eigenvalues()(i));
    std::sort(mags.begin(), mags.end());

    std::vector<double> nu(nm);
    for (int j = 0; j < nm; ++j) {
        const double lo = mags[2 * j], hi = mags[2 * j + 1];
        if (hi - lo > pair_tol * std::max(1.0, hi))
            throw DegeneracyError("symplectic_eigenvalues: +/- pairing failed (gap " +
                                  std::to_string(hi - lo) + ")");
        nu[j] = 0.5 * (lo + hi);
    }
    return nu;
}

}  // namespace gnm
