#include "trust/samplers.hpp"

#include <cmath>

#include "trust/errors.hpp"
#include "trust/student_t.hpp"

namespace trust {

double sample_gamma(double shape, double rate, RngStream& rng) {
  return rng.gamma(shape, rate);
}

double sample_trunc_normal_lower(double mean, double variance, RngStream& rng) {
  if (!(variance > 0.0)) throw domain_error("sample_trunc_normal_lower: variance <= 0");
  const double sd = std::sqrt(variance);
  const double a = -mean / sd;  // standardized lower bound
  const double tail = normal_cdf(-a);
  for (int tries = 0; tries < 64; ++tries) {
    double z;
    if (tail >= 1e-10) {
      // P(Z > z | Z > a) = tail * v inverted through the upper tail.
      double v = rng.uniform();
      z = -normal_quantile(std::max(1e-300, tail * v));
    } else {
      // Robert's exponential proposal on [a, inf).
      const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
      for (;;) {
        double x = a + rng.exponential() / lambda;
        double log_acc = -0.5 * (x - lambda) * (x - lambda);
        if (std::log(rng.uniform()) < log_acc) {
          z = x;
          break;
        }
      }
    }
    double out = mean + sd * z;
    if (out > 0.0) return out;  // guard against rounding at the boundary
  }
  throw numeric_error("sample_trunc_normal_lower: persistent boundary rounding");
}

Vector sample_positive_orthant_mvn(const Matrix& sigma_chol, RngStream& rng,
                                   int max_tries) {
  const int q = static_cast<int>(sigma_chol.rows());
  Vector eps(q), draw(q);
  for (int t = 0; t < max_tries; ++t) {
    for (int k = 0; k < q; ++k) eps(k) = rng.normal();
    draw = sigma_chol * eps;
    if ((draw.array() > 0.0).all()) return draw;
  }
  throw numeric_error(
      "sample_positive_orthant_mvn: orthant mass too small for rejection sampling");
}

}  // namespace trust
