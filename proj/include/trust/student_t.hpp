#pragma once

#include <limits>

namespace trust {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Degrees of freedom equal to kInf select the Gaussian limit throughout.

double normal_pdf(double x);
double normal_log_pdf(double x);
double normal_cdf(double x);
double normal_log_cdf(double x);
double normal_quantile(double u);

// Univariate Student t with location zero. `scale2` is the scale-matrix
// entry, i.e. the square of the usual scale parameter, matching the
// multivariate convention t(x; V, nu).
double student_t_pdf(double x, double scale2, double nu);
double student_t_log_pdf(double x, double scale2, double nu);
double student_t_cdf(double x, double scale2, double nu);
double student_t_log_cdf(double x, double scale2, double nu);
double student_t_quantile(double u, double scale2, double nu);

// Standardized shorthands (scale2 = 1).
inline double t_cdf(double x, double nu) { return student_t_cdf(x, 1.0, nu); }
inline double t_quantile(double u, double nu) { return student_t_quantile(u, 1.0, nu); }

double gamma_log_pdf(double x, double shape, double rate);

// Quantile of chi2(nu)/nu, used by scale-mixture quadratures and the QMC
// multivariate t integrand. u in (0,1).
double chi2_scale_quantile(double u, double nu);

}  // namespace trust
