// channels.hpp — Gaussian channel algebra on covariance matrices:
// application, composition, local embedding, intermediate maps, and the
// CPTP / incompatibility-breaking / entanglement-breaking predicates.

#pragma once

#include "gnm/symplectic.hpp"

namespace gnm {

inline constexpr double kCptpTol = 1e-9;
inline constexpr double kEbProbeSqueezing = 10.0;  // stand-in for the r -> inf probe state
inline constexpr double kEbTol = 1e-8;

/// Gaussian channel sigma -> transform * sigma * transform^T + noise.
/// `noise` must be symmetric; (I, 0) is the identity map.
struct GaussianChannel {
    int modes;
    Matrix transform;  // T
    Matrix noise;      // N

    GaussianChannel(int modes, Matrix transform, Matrix noise);
};

GaussianChannel identity_channel(int modes);

/// Single-mode isotropic channel (tau*I, eta*I); tau = 1 is classical noise.
GaussianChannel isotropic_channel(double tau, double eta);

CovarianceMatrix apply(const GaussianChannel& ch, const CovarianceMatrix& cov);

/// Composition later after earlier: (T''T', T''N'T''^T + N'').
GaussianChannel compose(const GaussianChannel& later, const GaussianChannel& earlier);

/// Embed a single-mode channel at `target_mode` (0-based) of an n-mode
/// system: identity transform and zero noise everywhere else.
GaussianChannel embed_local(const GaussianChannel& ch, int total_modes, int target_mode);

/// Bridge map (T_{t,s}, N_{t,s}) with compose(result, earlier) == later.
/// Requires earlier.transform invertible, else NonInvertibleEvolutionError.
GaussianChannel intermediate_map(const GaussianChannel& later, const GaussianChannel& earlier);

/// Complete positivity: N - i T Omega T^T + i Omega >= -tol.
bool is_cptp(const GaussianChannel& ch, double tol = kCptpTol);

/// Single-mode closed-form CPTP conditions (N >= 0 and
/// det N >= (det T - 1)^2); redundant route used to cross-check is_cptp.
bool is_cptp_single_mode(const GaussianChannel& ch, double tol = kCptpTol);

/// Gaussian incompatibility breaking: N - i T Omega T^T >= -tol.
bool is_gib(const GaussianChannel& ch, double tol = kCptpTol);

/// Entanglement breaking. Single-mode isotropic channels use the closed
/// form eta >= tau^2 + 1; other single-mode channels fall back to a PPT
/// probe on a strongly squeezed two-mode state when
/// `allow_numerical_proxy` is set. Local embeddings with an untouched mode
/// are never EB; any other multimode input is unsupported.
bool is_eb(const GaussianChannel& ch, bool allow_numerical_proxy = true);

}  // namespace gnm
