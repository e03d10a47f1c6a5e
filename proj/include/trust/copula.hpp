#pragma once

#include <array>

#include "trust/inference.hpp"
#include "trust/marginal_table.hpp"
#include "trust/mvcdf.hpp"
#include "trust/params.hpp"

namespace trust {

// Rank transform to the open unit hypercube: u_ij = rank / (n+1), ties
// averaged. Throws validation_error on constant columns.
Matrix pseudo_observations(const Matrix& y);

// Copula log density at a point u in (0,1)^d. Marginal quantiles come from
// the numerical tables; densities are evaluated exactly.
double copula_log_density(const Vector& u, const TrustParams& p);

// Kendall and Spearman rank correlations for a variable pair (0-based),
// through the Gaussian-orthant form of the rank-correlation identities.
// Numerators above dimension 3 use QMC; pass the stream for those.
double kendall(const TrustParams& p, int i, int j, const QmcOptions& opts, RngStream& rng);
double spearman(const TrustParams& p, int i, int j, const QmcOptions& opts, RngStream& rng);

// Bivariate marginal copula CDF C(u1, u2) for the pair (i, j).
double bivariate_copula_cdf(double u1, double u2, const TrustParams& p, int i, int j,
                            const QmcOptions& opts, RngStream& rng);

struct QuantileDependence {
  double ll = 0.0, ur = 0.0, lr = 0.0, ul = 0.0;
};

// Quadrant quantile dependence at level kappa in (0, 0.5], reduced to the
// copula CDF by: ll = C(k,k)/k, ur = (1-2(1-k)+C(1-k,1-k))/k,
// lr = (k-C(k,1-k))/k, ul = (k-C(1-k,k))/k.
QuantileDependence quantile_dependence(const TrustParams& p, int i, int j, double kappa,
                                       const QmcOptions& opts, RngStream& rng);

struct AsymmetryMeasures {
  double major = 0.0;  // lambda_UR - lambda_LL
  double minor = 0.0;  // lambda_UL - lambda_LR
};

AsymmetryMeasures asymmetry_measures(const QuantileDependence& lam);

// Per-row copula log scores of new data at the identified posterior-mean
// point (falling back to the highest-likelihood draw when invalid).
struct LogScoreResult {
  Vector per_row;
  Vector cumulative;
  bool plug_in_fallback = false;
};

LogScoreResult log_score(const Matrix& u_new, const PosteriorDraws& draws);

}  // namespace trust
