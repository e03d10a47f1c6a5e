#pragma once

#include "trust/matrix.hpp"

namespace trust {

// Bivariate standard normal P(X <= b1, Y <= b2), correlation rho.
// Drezner-Wesolowsky with Genz's Gauss-Legendre refinement, |err| ~ 5e-16.
double bvn_cdf(double b1, double b2, double rho);

// Trivariate standard normal P(X <= b), correlation matrix r (3x3), by
// conditioning on one coordinate and integrating bvn_cdf with a graded
// Gauss-Legendre rule.
double tvn_cdf(const Vector& b, const Matrix& r);

// P(N(0, s) <= 0) for dim(s) <= 3, closed form (df-free orthant, so this is
// also T_q(0; s, nu) for every nu).
double orthant_zero(const Matrix& s);

// Multivariate t CDF at a general point for dimension 1..3, deterministic:
// scale-mixture quadrature over the chi2 mixing variable with graded
// Gauss-Legendre panels. df = kInf gives the Gaussian case.
class SmallTCdf {
 public:
  explicit SmallTCdf(double df, int nodes_per_panel = 16);

  double df() const { return df_; }

  // P(T <= x) with T ~ t_dim(0, scale, df). Standardizes scale internally.
  double cdf(const Vector& x, const Matrix& scale) const;

  // Bivariate fast path with pre-standardized inputs.
  double cdf2(double x1, double x2, double rho) const;

 private:
  double df_;
  std::vector<double> s_;  // sqrt(chi2_quantile(u, df)/df) at quadrature nodes
  std::vector<double> w_;
};

}  // namespace trust
