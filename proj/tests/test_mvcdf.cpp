#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "trust/mvcdf.hpp"
#include "trust/rng.hpp"
#include "trust/student_t.hpp"

using namespace trust;

TEST_SUITE_BEGIN("mvcdf");

namespace {

Matrix random_correlation(int d, RngStream& rng) {
  Matrix w(d, d + 3);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d + 3; ++j) w(i, j) = rng.normal();
  Matrix s = w * w.transpose();
  return to_correlation(s);
}

}  // namespace

TEST_CASE("mvn orthant basics") {
  RngStream rng(1, 10);
  QmcOptions opts;

  Matrix diag = Matrix::Identity(3, 3);
  diag(1, 1) = 4.0;  // scale invariance of the orthant
  auto est = mvn_cdf(Vector::Zero(3), diag, opts, rng);
  CHECK(est.value == doctest::Approx(0.125).epsilon(1e-10));

  Matrix s2(2, 2);
  s2 << 1.0, 0.5, 0.5, 1.0;
  auto est2 = mvn_cdf(Vector::Zero(2), s2, opts, rng);
  CHECK(std::abs(est2.value - 1.0 / 3.0) < std::max(3.0 * est2.se, 1e-9));
}

TEST_CASE("mvn d=4 zero orthant against plain Monte Carlo") {
  RngStream rng(3, 11);
  Matrix corr = random_correlation(4, rng);
  QmcOptions opts;
  auto est = mvn_cdf(Vector::Zero(4), corr, opts, rng);

  Matrix chol = cholesky_or_throw(corr, "test");
  RngStream mc(3, 12);
  const int n = 10000000;
  long hits = 0;
  Vector e(4);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 4; ++k) e(k) = mc.normal();
    Vector x = chol * e;
    if ((x.array() <= 0.0).all()) ++hits;
  }
  const double p_mc = static_cast<double>(hits) / n;
  const double se_mc = std::sqrt(p_mc * (1.0 - p_mc) / n);
  const double se = std::sqrt(se_mc * se_mc + est.se * est.se);
  CHECK(std::abs(est.value - p_mc) < 3.0 * se);
}

TEST_CASE("mvt reductions and orthant identity") {
  RngStream rng(5, 13);
  QmcOptions opts;

  // d=1 reduction to the univariate t
  Vector x1(1);
  x1 << 0.83;
  Matrix s1 = Matrix::Identity(1, 1) * 2.25;
  auto e1 = mvt_cdf(x1, s1, 7.0, opts, rng);
  CHECK(e1.value == doctest::Approx(student_t_cdf(0.83, 2.25, 7.0)).epsilon(1e-12));
  CHECK(e1.se == 0.0);

  auto e2 = mvt_cdf(Vector::Zero(2), Matrix::Identity(2, 2), 4.5, opts, rng);
  CHECK(std::abs(e2.value - 0.25) < std::max(3.0 * e2.se, 1e-9));

  // df-free zero orthant across nu
  Matrix corr = random_correlation(3, rng);
  auto base = mvn_cdf(Vector::Zero(3), corr, opts, rng);
  for (double nu : {3.0, 5.0, 10.0, 50.0}) {
    auto et = mvt_cdf(Vector::Zero(3), corr, nu, opts, rng);
    const double se = std::sqrt(base.se * base.se + et.se * et.se) + 1e-12;
    CHECK(std::abs(et.value - base.value) < 3.0 * se);
  }
}

TEST_CASE("mvt d=3 general point against plain Monte Carlo") {
  RngStream rng(6, 14);
  Matrix corr = random_correlation(3, rng);
  Vector x(3);
  x << 0.4, -0.6, 1.2;
  const double nu = 5.0;
  QmcOptions opts;
  auto est = mvt_cdf(x, corr, nu, opts, rng);

  Matrix chol = cholesky_or_throw(corr, "test");
  RngStream mc(6, 15);
  const int n = 10000000;
  long hits = 0;
  Vector e(3);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) e(k) = mc.normal();
    const double w = mc.gamma(0.5 * nu, 0.5 * nu);
    Vector t = (chol * e) / std::sqrt(w);
    if ((t.array() <= x.array()).all()) ++hits;
  }
  const double p_mc = static_cast<double>(hits) / n;
  const double se_mc = std::sqrt(p_mc * (1.0 - p_mc) / n);
  const double se = std::sqrt(se_mc * se_mc + est.se * est.se);
  CHECK(std::abs(est.value - p_mc) < 3.0 * se);
}

TEST_CASE("monotone in each coordinate within QMC error") {
  RngStream rng(7, 16);
  Matrix corr = random_correlation(4, rng);
  QmcOptions opts;
  Vector x(4);
  x << -0.3, 0.2, 0.8, -1.0;
  for (int j = 0; j < 4; ++j) {
    Vector lo = x, hi = x;
    hi(j) += 0.5;
    auto a = mvn_cdf(lo, corr, opts, rng);
    auto b = mvn_cdf(hi, corr, opts, rng);
    CHECK(b.value - a.value > -3.0 * (a.se + b.se));
    auto at = mvt_cdf(lo, corr, 6.0, opts, rng);
    auto bt = mvt_cdf(hi, corr, 6.0, opts, rng);
    CHECK(bt.value - at.value > -3.0 * (at.se + bt.se));
  }
}

TEST_CASE("bit reproducible given seed and stream") {
  Matrix corr(3, 3);
  corr << 1.0, 0.3, -0.4, 0.3, 1.0, 0.2, -0.4, 0.2, 1.0;
  Vector x(3);
  x << 0.3, 0.1, -0.2;
  QmcOptions opts;
  RngStream r1(77, 4), r2(77, 4);
  auto a = mvt_cdf(x, corr, 8.0, opts, r1);
  auto b = mvt_cdf(x, corr, 8.0, opts, r2);
  CHECK(a.value == b.value);
  CHECK(a.se == b.se);
}

TEST_CASE("dimension and validity errors") {
  RngStream rng(9, 17);
  QmcOptions opts;
  CHECK_THROWS_AS(mvn_cdf(Vector::Zero(13), Matrix::Identity(13, 13), opts, rng),
                  domain_error);
  Matrix bad = Matrix::Constant(3, 3, 1.0);
  CHECK_THROWS_AS(mvn_cdf(Vector::Zero(3), bad, opts, rng), decomposition_error);
}

TEST_SUITE_END();
