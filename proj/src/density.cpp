#include "trust/density.hpp"

#include <algorithm>
#include <cmath>

#include "trust/errors.hpp"
#include "trust/mvsmall.hpp"
#include "trust/student_t.hpp"

namespace trust {

namespace {

double log_skew_factor(const TrustParams& p, const Vector& z, double q_form) {
  const int d = p.d();
  double acc = 0.0;
  if (p.gaussian()) {
    for (int k = 0; k < p.q(); ++k) acc += normal_log_cdf(p.alpha().col(k).dot(z));
    return acc;
  }
  const double nu = p.nu();
  const double c = std::sqrt((nu + d) / (nu + q_form));
  for (int k = 0; k < p.q(); ++k)
    acc += student_t_log_cdf(c * p.alpha().col(k).dot(z), 1.0, nu + d);
  return acc;
}

}  // namespace

double log_mvt_pdf(const Vector& x, const Matrix& v, double df) {
  const int d = static_cast<int>(x.size());
  Eigen::LLT<Matrix> llt(v);
  if (llt.info() != Eigen::Success)
    throw decomposition_error("log_mvt_pdf: scale matrix not positive definite");
  Matrix l = llt.matrixL();
  double quad = l.triangularView<Eigen::Lower>().solve(x).squaredNorm();
  double log_det = log_det_from_cholesky(l);
  if (df == kInf)
    return -0.5 * d * std::log(2.0 * M_PI) - 0.5 * log_det - 0.5 * quad;
  return std::lgamma(0.5 * (df + d)) - std::lgamma(0.5 * df) -
         0.5 * d * std::log(df * M_PI) - 0.5 * log_det -
         0.5 * (df + d) * std::log1p(quad / df);
}

double log_pdf_joint(const Vector& z, const TrustParams& p) {
  if (static_cast<int>(z.size()) != p.d()) throw domain_error("log_pdf_joint: dimension mismatch");
  if (!z.allFinite()) throw domain_error("log_pdf_joint: z must be finite");
  const double q_form = p.quad_omega(z);
  double log_t;
  if (p.gaussian()) {
    log_t = -0.5 * p.d() * std::log(2.0 * M_PI) - 0.5 * p.log_det_omega() - 0.5 * q_form;
  } else {
    const double nu = p.nu();
    log_t = std::lgamma(0.5 * (nu + p.d())) - std::lgamma(0.5 * nu) -
            0.5 * p.d() * std::log(nu * M_PI) - 0.5 * p.log_det_omega() -
            0.5 * (nu + p.d()) * std::log1p(q_form / nu);
  }
  return log_t + log_skew_factor(p, z, q_form) - std::log(p.orthant_sigma());
}

double log_pdf_marginal(double zj, int j, const TrustParams& p) {
  if (j < 0 || j >= p.d()) throw domain_error("log_pdf_marginal: index out of range");
  if (!std::isfinite(zj)) throw domain_error("log_pdf_marginal: z must be finite");
  const int q = p.q();
  const double nu = p.nu();
  double log_env = p.gaussian() ? normal_log_pdf(zj) : student_t_log_pdf(zj, 1.0, nu);
  if (q == 0) return log_env;

  Vector dj = p.delta().col(j);
  Matrix hj = p.sigma() - dj * dj.transpose();
  if (!is_positive_definite(hj))
    throw constraint_error("log_pdf_marginal: Sigma - Delta_j Delta_j' not positive definite");
  const double c = p.gaussian() ? 1.0 : std::sqrt((nu + 1.0) / (nu + zj * zj));
  SmallTCdf tq(p.gaussian() ? kInf : nu + 1.0);
  double num = tq.cdf(c * zj * dj, hj);
  double log_num;
  if (num > 1e-290) {
    log_num = std::log(num);
  } else {
    // Deep-tail fallback through the product bound of the univariate terms.
    log_num = 0.0;
    Vector sd = hj.diagonal().cwiseSqrt();
    for (int k = 0; k < q; ++k)
      log_num += p.gaussian() ? normal_log_cdf(c * zj * dj(k) / sd(k))
                              : student_t_log_cdf(c * zj * dj(k) / sd(k), 1.0, nu + 1.0);
  }
  return log_env + log_num - std::log(p.orthant_sigma());
}

double log_pdf_extended(const Vector& z, const TrustParams& p, const Vector& tau) {
  if (static_cast<int>(z.size()) != p.d()) throw domain_error("log_pdf_extended: dimension mismatch");
  if (static_cast<int>(tau.size()) != p.q())
    throw domain_error("log_pdf_extended: tau must have q entries");
  if (!z.allFinite() || !tau.allFinite()) throw domain_error("log_pdf_extended: non-finite input");
  const double q_form = p.quad_omega(z);
  const int d = p.d();
  const double nu = p.nu();

  double log_t;
  if (p.gaussian()) {
    log_t = -0.5 * d * std::log(2.0 * M_PI) - 0.5 * p.log_det_omega() - 0.5 * q_form;
  } else {
    log_t = std::lgamma(0.5 * (nu + d)) - std::lgamma(0.5 * nu) -
            0.5 * d * std::log(nu * M_PI) - 0.5 * p.log_det_omega() -
            0.5 * (nu + d) * std::log1p(q_form / nu);
  }
  const double c = p.gaussian() ? 1.0 : std::sqrt((nu + d) / (nu + q_form));
  double acc = 0.0;
  for (int k = 0; k < p.q(); ++k) {
    const double tau_tilde = tau(k) / std::sqrt(p.h()(k));
    const double arg = c * (tau_tilde + p.alpha().col(k).dot(z));
    acc += p.gaussian() ? normal_log_cdf(arg) : student_t_log_cdf(arg, 1.0, nu + d);
  }
  double denom = 1.0;
  if (p.q() > 0) {
    SmallTCdf tq(p.gaussian() ? kInf : nu);
    denom = tq.cdf(tau, p.sigma());
  }
  return log_t + acc - std::log(denom);
}

double log_pdf_conditional(const Vector& z1, const Vector& z2,
                           const std::vector<int>& idx1, const std::vector<int>& idx2,
                           const TrustParams& p) {
  const int d1 = static_cast<int>(idx1.size());
  const int d2 = static_cast<int>(idx2.size());
  if (d1 + d2 != p.d() || d1 < 1 || d2 < 1)
    throw domain_error("log_pdf_conditional: invalid partition");
  std::vector<bool> seen(p.d(), false);
  for (int block = 0; block < 2; ++block) {
    for (int i : block == 0 ? idx1 : idx2) {
      if (i < 0 || i >= p.d() || seen[i])
        throw domain_error("log_pdf_conditional: indices must partition 0..d-1");
      seen[i] = true;
    }
  }
  if (static_cast<int>(z1.size()) != d1 || static_cast<int>(z2.size()) != d2)
    throw domain_error("log_pdf_conditional: dimension mismatch");

  Matrix om1(d1, d1), om2(d2, d2), om12(d1, d2);
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d1; ++b) om1(a, b) = p.omega()(idx1[a], idx1[b]);
  for (int a = 0; a < d2; ++a)
    for (int b = 0; b < d2; ++b) om2(a, b) = p.omega()(idx2[a], idx2[b]);
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d2; ++b) om12(a, b) = p.omega()(idx1[a], idx2[b]);

  Eigen::LLT<Matrix> llt2(om2);
  if (llt2.info() != Eigen::Success)
    throw decomposition_error("log_pdf_conditional: Omega_2 not positive definite");

  Vector o2z2 = llt2.solve(z2);
  Vector mu_star = om12 * o2z2;
  Matrix om_star = om1 - om12 * llt2.solve(om12.transpose());
  const double q2 = z2.dot(o2z2);
  const double nu = p.nu();
  const bool gauss = p.gaussian();
  const double scale_fac = gauss ? 1.0 : (nu + q2) / (nu + d2);

  double lead = log_mvt_pdf(z1 - mu_star, scale_fac * om_star, gauss ? kInf : nu + d2);

  // Skew factor uses the full vector in its natural order.
  Vector z(p.d());
  for (int a = 0; a < d1; ++a) z(idx1[a]) = z1(a);
  for (int a = 0; a < d2; ++a) z(idx2[a]) = z2(a);
  const double q_full = p.quad_omega(z);
  const double c = gauss ? 1.0 : std::sqrt((nu + p.d()) / (nu + q_full));
  double num = 0.0;
  for (int k = 0; k < p.q(); ++k) {
    const double arg = c * p.alpha().col(k).dot(z);
    num += gauss ? normal_log_cdf(arg) : student_t_log_cdf(arg, 1.0, nu + p.d());
  }

  double log_den = 0.0;
  if (p.q() > 0) {
    Matrix delta2(p.q(), d2);
    for (int b = 0; b < d2; ++b) delta2.col(b) = p.delta().col(idx2[b]);
    Vector m2 = delta2 * o2z2;
    Matrix s2 = scale_fac * (p.sigma() - delta2 * llt2.solve(delta2.transpose()));
    SmallTCdf tq(gauss ? kInf : nu + d2);
    log_den = std::log(std::max(tq.cdf(m2, s2), 1e-300));
  }
  return lead + num - log_den;
}

double log_pdf_location_scale(const Vector& y, const Vector& mu, const Vector& s,
                              const TrustParams& p) {
  if (y.size() != p.d() || mu.size() != p.d() || s.size() != p.d())
    throw domain_error("log_pdf_location_scale: dimension mismatch");
  if ((s.array() <= 0.0).any()) throw domain_error("log_pdf_location_scale: scales must be positive");
  Vector z = (y - mu).cwiseQuotient(s);
  return log_pdf_joint(z, p) - s.array().log().sum();
}

}  // namespace trust
