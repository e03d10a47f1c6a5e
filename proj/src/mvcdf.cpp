#include "trust/mvcdf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trust/errors.hpp"
#include "trust/student_t.hpp"

namespace trust {

namespace {

constexpr double kSqrtPrimes[kMaxCdfDim + 1] = {
    1.4142135623730951, 1.7320508075688772, 2.23606797749979,  2.6457513110645907,
    3.3166247903554,    3.605551275463989,  4.123105625617661, 4.358898943540674,
    4.795831523312719,  5.385164807134504,  5.5677643628300215, 6.082762530298219,
    6.4031242374328485};

double clamp_prob(double p) { return std::min(1.0 - 1e-16, std::max(1e-300, p)); }

// Variable-reordered Cholesky for the separation-of-variables integrand.
// Limits b are permuted in place alongside the factor. Genz-Bretz ordering:
// at each stage pick the remaining variable with the smallest conditional
// probability, conditioning through truncated expectations.
void reorder_cholesky(Matrix& c, Vector& b) {
  const int d = static_cast<int>(b.size());
  Matrix l = Matrix::Zero(d, d);
  Vector y = Vector::Zero(d);
  for (int j = 0; j < d; ++j) {
    int best = j;
    double best_p = kInf;
    for (int i = j; i < d; ++i) {
      double num = b(i);
      double var = c(i, i);
      for (int k = 0; k < j; ++k) {
        num -= l(i, k) * y(k);
        var -= l(i, k) * l(i, k);
      }
      if (var <= 0.0) var = 1e-28;
      double p = normal_cdf(num / std::sqrt(var));
      if (p < best_p) {
        best_p = p;
        best = i;
      }
    }
    if (best != j) {
      std::swap(b(j), b(best));
      c.row(j).swap(c.row(best));
      c.col(j).swap(c.col(best));
      l.row(j).swap(l.row(best));
    }
    double var = c(j, j);
    for (int k = 0; k < j; ++k) var -= l(j, k) * l(j, k);
    if (var <= 1e-12) throw decomposition_error("mv cdf: matrix not positive definite");
    l(j, j) = std::sqrt(var);
    for (int i = j + 1; i < d; ++i) {
      double cov = c(i, j);
      for (int k = 0; k < j; ++k) cov -= l(i, k) * l(j, k);
      l(i, j) = cov / l(j, j);
    }
    double e = b(j);
    for (int k = 0; k < j; ++k) e -= l(j, k) * y(k);
    e /= l(j, j);
    double cdf = std::max(normal_cdf(e), 1e-300);
    y(j) = -normal_pdf(e) / cdf;  // E[Z | Z <= e]
  }
  c = l;
}

// One integrand evaluation. w holds d-1 uniforms (plus one leading entry for
// the t mixing variable when nu is finite).
double sov_sample(const Matrix& l, const Vector& b, const double* w, double s) {
  const int d = static_cast<int>(b.size());
  double e = normal_cdf(s * b(0) / l(0, 0));
  double p = e;
  if (d == 1) return p;
  Vector y(d - 1);
  for (int j = 1; j < d; ++j) {
    y(j - 1) = normal_quantile(clamp_prob(w[j - 1] * e));
    double num = s * b(j);
    for (int k = 0; k < j; ++k) num -= l(j, k) * y(k);
    e = normal_cdf(num / l(j, j));
    p *= e;
  }
  return p;
}

CdfEstimate qmc_cdf(const Vector& x, const Matrix& sigma, double nu,
                    const QmcOptions& opts, RngStream& rng) {
  const int d = static_cast<int>(x.size());
  if (d < 1) throw domain_error("mv cdf: empty input");
  if (d > kMaxCdfDim) throw domain_error("mv cdf: dimension above 12 not supported");
  if (sigma.rows() != d || sigma.cols() != d)
    throw domain_error("mv cdf: dimension mismatch");
  if (!(nu > 0.0)) throw domain_error("mv cdf: nu must be positive");

  // Standardize to a correlation matrix; orthant-style inputs are scale
  // invariant per coordinate.
  Vector sd = sigma.diagonal().cwiseSqrt();
  if ((sd.array() <= 0.0).any()) throw decomposition_error("mv cdf: zero variance");
  Vector b = x.cwiseQuotient(sd);
  Matrix c = to_correlation(sigma);

  const bool gaussian = (nu == kInf);
  if (d == 1) {
    double v = gaussian ? normal_cdf(b(0)) : t_cdf(b(0), nu);
    return {v, 0.0};
  }
  reorder_cholesky(c, b);

  const int dim_u = (d - 1) + (gaussian ? 0 : 1);  // lattice dimension
  const int n = std::max(32, opts.points);
  const int reps = std::max(2, opts.randomizations);

  std::vector<double> shift(dim_u), u(dim_u);
  std::vector<double> est(reps);
  for (int r = 0; r < reps; ++r) {
    for (int k = 0; k < dim_u; ++k) shift[k] = rng.uniform();
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) {
      for (int k = 0; k < dim_u; ++k) {
        double v = std::fmod(i * kSqrtPrimes[k] + shift[k], 1.0);
        u[k] = std::abs(2.0 * v - 1.0);  // baker's transform
      }
      double s = 1.0;
      const double* w = u.data();
      if (!gaussian) {
        s = std::sqrt(chi2_scale_quantile(clamp_prob(u[0]), nu));
        w = u.data() + 1;
      }
      acc += (sov_sample(c, b, w, s) - acc) / i;
    }
    est[r] = acc;
  }
  double mean = std::accumulate(est.begin(), est.end(), 0.0) / reps;
  double ss = 0.0;
  for (double e : est) ss += (e - mean) * (e - mean);
  double se = std::sqrt(ss / (reps - 1.0) / reps);
  return {std::min(1.0, std::max(0.0, mean)), se};
}

}  // namespace

CdfEstimate mvn_cdf(const Vector& x, const Matrix& sigma, const QmcOptions& opts,
                    RngStream& rng) {
  return qmc_cdf(x, sigma, kInf, opts, rng);
}

CdfEstimate mvt_cdf(const Vector& x, const Matrix& sigma, double nu,
                    const QmcOptions& opts, RngStream& rng) {
  return qmc_cdf(x, sigma, nu, opts, rng);
}

}  // namespace trust
