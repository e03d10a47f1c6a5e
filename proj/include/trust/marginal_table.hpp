#pragma once

#include <memory>

#include "trust/mvsmall.hpp"
#include "trust/params.hpp"

namespace trust {

// Envelope-probability grid shared by all margins at a given nu: knots
// uniform in u = T_nu(z), their z quantiles, the skew-curve coordinate
// g(z) = z sqrt((nu+1)/(nu+z^2)), and Gauss-Legendre nodes per cell for the
// cumulative integration. Rebuilding tables after a parameter move reuses
// this grid unless nu itself changed.
class EnvelopeGrid {
 public:
  explicit EnvelopeGrid(double nu, int knots = 512, int gl_per_cell = 5);

  double nu() const { return nu_; }
  int knots() const { return n_; }
  int gl_per_cell() const { return m_; }
  double u_lo() const { return u_(0); }
  double u_hi() const { return u_(n_ - 1); }
  double cell_width() const { return width_; }

  const Vector& u() const { return u_; }
  const Vector& z() const { return z_; }
  const Vector& g() const { return g_; }
  const Matrix& gl_g() const { return gl_g_; }  // (n-1) x m
  const Vector& gl_w() const { return gl_w_; }  // m, already scaled by cell width

  double curve(double z) const;                 // g(z)
  double g_min() const { return g_lo_; }
  double g_max() const { return g_hi_; }

  double env_cdf(double z) const;
  double env_quantile(double u) const;
  double env_log_pdf(double z) const;

 private:
  double nu_;
  int n_, m_;
  double width_;
  double g_lo_, g_hi_;
  Vector u_, z_, g_, gl_w_;
  Matrix gl_g_;
};

// Numerical CDF / quantile / density of one margin. The q-variate skew
// factor is interpolated along its one-dimensional curve with a Chebyshev
// polynomial in logit space, then integrated once against the envelope.
class MarginalTable {
 public:
  MarginalTable(const TrustParams& p, int j, std::shared_ptr<const EnvelopeGrid> grid,
                int cheb_points = 65);

  double cdf(double z) const;
  double quantile(double u) const;
  double log_pdf(double z) const;

  const EnvelopeGrid& grid() const { return *grid_; }

 private:
  double curve_logit(double g) const;   // barycentric eval of logit T(g)
  double skew_cdf(double g) const;      // T_q along the curve, in [0,1]
  double log_skew_cdf(double g) const;
  double exact_skew_cdf(double g) const;

  std::shared_ptr<const EnvelopeGrid> grid_;
  int q_ = 0;
  double orthant_ = 1.0;
  double log_orthant_ = 0.0;

  // standardized skew direction and conditional correlation
  Vector dir_;          // delta_j / sd(H_j)
  Matrix hj_corr_;
  std::unique_ptr<SmallTCdf> tcdf_;

  // Chebyshev-Lobatto interpolant of logit T on [g_min, g_max]
  Vector cx_, cf_, cw_;

  // cumulative table at envelope knots
  Vector f_;            // CDF values
  Vector slope_;        // dF/du at knots (monotone-clamped)
  double total_ = 1.0;  // numeric total mass
};

// Convenience one-shot wrappers.
double marginal_cdf(double zj, int j, const TrustParams& p);
double marginal_quantile(double u, int j, const TrustParams& p);

}  // namespace trust
