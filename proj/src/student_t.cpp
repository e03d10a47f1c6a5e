#include "trust/student_t.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "trust/errors.hpp"

namespace trust {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2*pi)/2
}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / 2.5066282746310005; }

double normal_log_pdf(double x) { return -0.5 * x * x - kHalfLog2Pi; }

double normal_cdf(double x) {
  if (!std::isfinite(x)) return x > 0 ? 1.0 : 0.0;
  return boost::math::cdf(kStdNormal, x);
}

double normal_log_cdf(double x) {
  if (x > -37.0) return std::log(normal_cdf(x));
  // Asymptotic tail: Phi(x) ~ phi(x)/|x| * (1 - 1/x^2 + ...)
  return normal_log_pdf(x) - std::log(-x) + std::log1p(-1.0 / (x * x));
}

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw domain_error("normal_quantile: u outside (0,1)");
  return boost::math::quantile(kStdNormal, u);
}

double student_t_pdf(double x, double scale2, double nu) {
  return std::exp(student_t_log_pdf(x, scale2, nu));
}

double student_t_log_pdf(double x, double scale2, double nu) {
  if (!(scale2 > 0.0)) throw domain_error("student_t: scale must be positive");
  if (!(nu > 0.0)) throw domain_error("student_t: nu must be positive");
  const double s = std::sqrt(scale2);
  const double z = x / s;
  if (nu == kInf) return normal_log_pdf(z) - std::log(s);
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(nu * M_PI) - std::log(s) -
         0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double student_t_cdf(double x, double scale2, double nu) {
  if (!(scale2 > 0.0)) throw domain_error("student_t: scale must be positive");
  if (!(nu > 0.0)) throw domain_error("student_t: nu must be positive");
  if (!std::isfinite(x)) {
    if (std::isnan(x)) throw domain_error("student_t_cdf: x is NaN");
    return x > 0 ? 1.0 : 0.0;
  }
  const double z = x / std::sqrt(scale2);
  if (nu == kInf) return normal_cdf(z);
  return boost::math::cdf(boost::math::students_t_distribution<double>(nu), z);
}

double student_t_log_cdf(double x, double scale2, double nu) {
  const double z = x / std::sqrt(scale2);
  if (nu == kInf) return normal_log_cdf(z);
  const double p = student_t_cdf(z, 1.0, nu);
  if (p > 1e-280) return std::log(p);
  // Power-law tail: F(z) ~ f(z)|z|/nu as z -> -inf.
  return student_t_log_pdf(z, 1.0, nu) + std::log(-z / nu);
}

double student_t_quantile(double u, double scale2, double nu) {
  if (!(u > 0.0 && u < 1.0)) throw domain_error("student_t_quantile: u outside (0,1)");
  if (!(scale2 > 0.0)) throw domain_error("student_t: scale must be positive");
  if (!(nu > 0.0)) throw domain_error("student_t: nu must be positive");
  const double s = std::sqrt(scale2);
  if (nu == kInf) return s * boost::math::quantile(kStdNormal, u);
  return s * boost::math::quantile(boost::math::students_t_distribution<double>(nu), u);
}

double gamma_log_pdf(double x, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw domain_error("gamma_log_pdf: shape and rate must be positive");
  if (!(x > 0.0)) return -kInf;
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double chi2_scale_quantile(double u, double nu) {
  if (!(u > 0.0 && u < 1.0)) throw domain_error("chi2_scale_quantile: u outside (0,1)");
  if (nu == kInf) return 1.0;
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(nu), u) / nu;
}

}  // namespace trust
