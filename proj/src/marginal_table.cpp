#include "trust/marginal_table.hpp"

#include <algorithm>
#include <cmath>

#include "trust/errors.hpp"
#include "trust/student_t.hpp"

namespace trust {

namespace {

constexpr double kGridTail = 1e-7;

// Gauss-Legendre on [0,1].
const double kGlx5[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                         0.76923465505284155, 0.95308992296933200};
const double kGlw5[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                         0.23931433524968324, 0.11846344252809454};

double logit(double p) {
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  return std::log(p) - std::log1p(-p);
}

double log_sigmoid(double s) { return s > 0.0 ? -std::log1p(std::exp(-s)) : s - std::log1p(std::exp(s)); }

}  // namespace

EnvelopeGrid::EnvelopeGrid(double nu, int knots, int gl_per_cell)
    : nu_(nu), n_(knots), m_(gl_per_cell) {
  if (!(nu > 0.0)) throw domain_error("EnvelopeGrid: nu must be positive");
  if (knots < 16 || gl_per_cell != 5) throw domain_error("EnvelopeGrid: unsupported layout");
  u_.resize(n_);
  z_.resize(n_);
  g_.resize(n_);
  width_ = (1.0 - 2.0 * kGridTail) / (n_ - 1);
  for (int i = 0; i < n_; ++i) {
    u_(i) = kGridTail + width_ * i;
    z_(i) = env_quantile(u_(i));
    g_(i) = curve(z_(i));
  }
  gl_g_.resize(n_ - 1, m_);
  gl_w_.resize(m_);
  for (int k = 0; k < m_; ++k) gl_w_(k) = kGlw5[k] * width_;
  for (int i = 0; i + 1 < n_; ++i)
    for (int k = 0; k < m_; ++k)
      gl_g_(i, k) = curve(env_quantile(u_(i) + width_ * kGlx5[k]));
  if (nu_ == kInf) {
    g_lo_ = z_(0);
    g_hi_ = z_(n_ - 1);
  } else {
    g_lo_ = -std::sqrt(nu_ + 1.0);
    g_hi_ = std::sqrt(nu_ + 1.0);
  }
}

double EnvelopeGrid::curve(double z) const {
  if (nu_ == kInf) return z;
  return z * std::sqrt((nu_ + 1.0) / (nu_ + z * z));
}

double EnvelopeGrid::env_cdf(double z) const {
  return nu_ == kInf ? normal_cdf(z) : t_cdf(z, nu_);
}

double EnvelopeGrid::env_quantile(double u) const {
  return nu_ == kInf ? normal_quantile(u) : t_quantile(u, nu_);
}

double EnvelopeGrid::env_log_pdf(double z) const {
  return nu_ == kInf ? normal_log_pdf(z) : student_t_log_pdf(z, 1.0, nu_);
}

MarginalTable::MarginalTable(const TrustParams& p, int j,
                             std::shared_ptr<const EnvelopeGrid> grid, int cheb_points)
    : grid_(std::move(grid)), q_(p.q()) {
  if (j < 0 || j >= p.d()) throw domain_error("MarginalTable: margin index out of range");
  if (!grid_) throw domain_error("MarginalTable: missing envelope grid");
  if (grid_->nu() != p.nu())
    throw domain_error("MarginalTable: envelope grid built for a different nu");
  const int n = grid_->knots();
  orthant_ = p.orthant_sigma();
  log_orthant_ = std::log(orthant_);

  if (q_ > 0) {
    Vector dj = p.delta().col(j);
    Matrix hj = p.sigma() - dj * dj.transpose();
    Vector sd = hj.diagonal().cwiseSqrt();
    if (!(sd.array() > 0.0).all())
      throw constraint_error("MarginalTable: Sigma - Delta_j Delta_j' not positive definite");
    dir_ = dj.cwiseQuotient(sd);
    hj_corr_ = to_correlation(hj);
    if (q_ >= 2 && !is_positive_definite(hj_corr_))
      throw constraint_error("MarginalTable: Sigma - Delta_j Delta_j' not positive definite");
    tcdf_ = std::make_unique<SmallTCdf>(p.gaussian() ? kInf : p.nu() + 1.0);

    // Chebyshev-Lobatto nodes of logit T_q(g * dir) over the curve range.
    const int nc = cheb_points;
    cx_.resize(nc);
    cf_.resize(nc);
    cw_.resize(nc);
    const double a = grid_->g_min(), b = grid_->g_max();
    for (int i = 0; i < nc; ++i) {
      const double t = std::cos(M_PI * i / (nc - 1));
      cx_(i) = 0.5 * (a + b) + 0.5 * (b - a) * t;
      cf_(i) = logit(exact_skew_cdf(cx_(i)));
      cw_(i) = (i % 2 == 0 ? 1.0 : -1.0) * (i == 0 || i == nc - 1 ? 0.5 : 1.0);
    }
  }

  // Cumulative integration of dF/du = T_q(g(u))/orthant over envelope cells.
  f_.resize(n);
  slope_.resize(n);
  const double u_lo = grid_->u_lo();
  if (q_ == 0) {
    f_ = grid_->u();
    slope_.setOnes();
    total_ = 1.0;
    return;
  }
  for (int i = 0; i < n; ++i) slope_(i) = skew_cdf(grid_->g()(i)) / orthant_;
  f_(0) = (skew_cdf(grid_->g_min()) / orthant_) * u_lo;
  for (int i = 0; i + 1 < n; ++i) {
    double cell = 0.0;
    for (int k = 0; k < grid_->gl_per_cell(); ++k)
      cell += grid_->gl_w()(k) * skew_cdf(grid_->gl_g()(i, k));
    f_(i + 1) = f_(i) + cell / orthant_;
  }
  total_ = f_(n - 1) + (skew_cdf(grid_->g_max()) / orthant_) * u_lo;

  // Fritsch-Carlson safeguard keeps the Hermite interpolant monotone.
  const double h = grid_->cell_width();
  for (int i = 0; i + 1 < n; ++i) {
    const double d = (f_(i + 1) - f_(i)) / h;
    if (d <= 0.0) {
      slope_(i) = 0.0;
      slope_(i + 1) = 0.0;
      continue;
    }
    slope_(i) = std::min(slope_(i), 3.0 * d);
    slope_(i + 1) = std::min(slope_(i + 1), 3.0 * d);
  }
}

double MarginalTable::curve_logit(double g) const {
  const int nc = static_cast<int>(cx_.size());
  double num = 0.0, den = 0.0;
  for (int i = 0; i < nc; ++i) {
    const double diff = g - cx_(i);
    if (std::abs(diff) < 1e-13) return cf_(i);
    const double t = cw_(i) / diff;
    num += t * cf_(i);
    den += t;
  }
  return num / den;
}

double MarginalTable::exact_skew_cdf(double g) const {
  if (q_ == 1) {
    const double x = g * dir_(0);
    return tcdf_->df() == kInf ? normal_cdf(x) : t_cdf(x, tcdf_->df());
  }
  if (q_ == 2) return tcdf_->cdf2(g * dir_(0), g * dir_(1), hj_corr_(0, 1));
  return tcdf_->cdf(g * dir_, hj_corr_);
}

double MarginalTable::skew_cdf(double g) const {
  if (q_ == 0) return 1.0;
  const double s = curve_logit(g);
  return 1.0 / (1.0 + std::exp(-s));
}

double MarginalTable::log_skew_cdf(double g) const {
  if (q_ == 0) return 0.0;
  return log_sigmoid(curve_logit(g));
}

double MarginalTable::cdf(double z) const {
  if (std::isnan(z)) throw domain_error("MarginalTable::cdf: NaN input");
  const double u = grid_->env_cdf(z);
  const double u_lo = grid_->u_lo(), u_hi = grid_->u_hi();
  if (u <= u_lo) return (skew_cdf(grid_->curve(z)) / orthant_) * u;
  if (u >= u_hi) return total_ - (skew_cdf(grid_->curve(z)) / orthant_) * (1.0 - u);
  const double h = grid_->cell_width();
  int c = std::min(static_cast<int>((u - u_lo) / h), grid_->knots() - 2);
  const double t = (u - grid_->u()(c)) / h;
  const double f0 = f_(c), f1 = f_(c + 1), m0 = slope_(c) * h, m1 = slope_(c + 1) * h;
  const double t2 = t * t, t3 = t2 * t;
  double v = (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * m0 +
             (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * m1;
  return std::clamp(v, 0.0, 1.0);
}

double MarginalTable::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw domain_error("MarginalTable::quantile: u outside (0,1)");
  const int n = grid_->knots();
  if (u <= f_(0)) {
    const double r = std::max(skew_cdf(grid_->g_min()) / orthant_, 1e-300);
    return grid_->env_quantile(std::max(u / r, 1e-300));
  }
  if (u >= f_(n - 1)) {
    const double r = std::max(skew_cdf(grid_->g_max()) / orthant_, 1e-300);
    const double tail = std::max((total_ - u) / r, 1e-300);
    return grid_->env_quantile(std::min(1.0 - tail, 1.0 - 1e-16));
  }
  // locate the cell, then invert the Hermite cubic with safeguarded Newton
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    (f_(mid) <= u ? lo : hi) = mid;
  }
  const double h = grid_->cell_width();
  const double f0 = f_(lo), f1 = f_(lo + 1), m0 = slope_(lo) * h, m1 = slope_(lo + 1) * h;
  double t = (f1 > f0) ? (u - f0) / (f1 - f0) : 0.5;
  double a = 0.0, b = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double t2 = t * t, t3 = t2 * t;
    const double val = (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * m0 +
                       (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * m1 - u;
    if (val > 0.0)
      b = t;
    else
      a = t;
    const double der = (6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * m0 +
                       (-6 * t2 + 6 * t) * f1 + (3 * t2 - 2 * t) * m1;
    double step = (der > 1e-300) ? val / der : 0.0;
    double tn = t - step;
    if (!(tn > a && tn < b)) tn = 0.5 * (a + b);
    if (std::abs(tn - t) < 1e-15) {
      t = tn;
      break;
    }
    t = tn;
  }
  return grid_->env_quantile(grid_->u()(lo) + t * h);
}

double MarginalTable::log_pdf(double z) const {
  if (!std::isfinite(z)) throw domain_error("MarginalTable::log_pdf: non-finite input");
  return grid_->env_log_pdf(z) + log_skew_cdf(grid_->curve(z)) - log_orthant_;
}

double marginal_cdf(double zj, int j, const TrustParams& p) {
  auto grid = std::make_shared<EnvelopeGrid>(p.nu());
  return MarginalTable(p, j, grid).cdf(zj);
}

double marginal_quantile(double u, int j, const TrustParams& p) {
  auto grid = std::make_shared<EnvelopeGrid>(p.nu());
  return MarginalTable(p, j, grid).quantile(u);
}

}  // namespace trust
