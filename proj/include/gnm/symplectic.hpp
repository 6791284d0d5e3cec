// symplectic.hpp — covariance-matrix representation, symplectic algebra,
// physicality tests and the canonical two-/three-mode squeezed states.
//
// Conventions: quadrature ordering (q1, p1, q2, p2, ...), vacuum variance 1,
// so the single-mode vacuum covariance matrix is the 2x2 identity.

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "gnm/errors.hpp"

namespace gnm {

using Matrix = Eigen::MatrixXd;

// Default numerical tolerances (absolute on eigenvalues unless noted).
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kSymTol = 1e-10;
inline constexpr double kPairTolRel = 1e-7;  // symplectic-eigenvalue pairing

/// Alice owns the leading n_a modes, Bob the trailing n_b.
struct Bipartition {
    int n_a;
    int n_b;
};

/// Real symmetric 2n x 2n second-moment matrix of an n-mode Gaussian state.
///
/// The plain constructor checks shape and symmetry only; `validated` also
/// requires the uncertainty-principle condition sigma + i*Omega >= 0.
class CovarianceMatrix {
  public:
    CovarianceMatrix(int modes, Matrix data);

    static CovarianceMatrix validated(int modes, Matrix data, double psd_tol = kPsdTol);

    int modes() const { return modes_; }
    const Matrix& data() const { return data_; }
    Eigen::Index dim() const { return data_.rows(); }

    // Block views under a bipartition (Alice first).
    Matrix block_a(const Bipartition& part) const;
    Matrix block_b(const Bipartition& part) const;
    Matrix block_c(const Bipartition& part) const;

    void check_bipartition(const Bipartition& part) const;

  private:
    int modes_;
    Matrix data_;
};

/// n-mode symplectic form: direct sum of n copies of [[0,1],[-1,0]].
Matrix symplectic_form(int n);

/// True iff the minimum eigenvalue of the Hermitian matrix m + i*Omega is
/// >= -tol. Throws InvariantViolationError for non-symmetric input.
bool is_physical(const Matrix& m, double tol = kPsdTol);
bool is_physical(const CovarianceMatrix& cov, double tol = kPsdTol);

/// Two-mode squeezed state: diagonal blocks cosh(2r)*I, off-diagonal
/// sinh(2r)*Z with Z = diag(1,-1). r = 0 is the two-mode vacuum.
CovarianceMatrix two_mode_squeezed(double r);

/// Three-mode GHZ/W state from three equally squeezed beams on a tritter:
/// identical diagonal blocks diag((e^{2r}+2e^{-2r})/3, (e^{-2r}+2e^{2r})/3)
/// and off-diagonal blocks (2/3)sinh(2r)*Z. Permutation symmetric.
CovarianceMatrix ghz_w_state(double r);

enum class SchurSide {
    of_b,  // M_B = B - C^T A^{-1} C  (A is inverted)
    of_a,  // M_A = A - C B^{-1} C^T  (B is inverted)
};

/// Schur complement of the requested block. The inverted block must have
/// minimum singular value above 1e-12 * ||block||, else SingularBlockError.
Matrix schur_complement(const CovarianceMatrix& cov, const Bipartition& part, SchurSide side);

/// Symplectic eigenvalues of a real symmetric 2m x 2m matrix: the absolute
/// values of the eigenvalues of i*Omega*M, paired into +/- duplicates and
/// returned sorted ascending (m values). Throws DegeneracyError when the
/// pairing fails beyond `pair_tol` (relative).
std::vector<double> symplectic_eigenvalues(const Matrix& m, double pair_tol = kPairTolRel);

}  // namespace gnm
