#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "trust/angles.hpp"
#include "trust/errors.hpp"
#include "trust/mvsmall.hpp"
#include "trust/rng.hpp"
#include "trust/samplers.hpp"
#include "trust/student_t.hpp"

using namespace trust;

TEST_SUITE_BEGIN("numkernel");

TEST_CASE("angles_to_cholesky basic identities") {
  AngleSet psi(2);
  psi(2, 1) = M_PI_2;
  Matrix b = angles_to_cholesky(psi);
  CHECK(b.isApprox(Matrix::Identity(2, 2), 1e-15));
  CHECK(correlation_from_angles(psi).isApprox(Matrix::Identity(2, 2), 1e-15));

  psi(2, 1) = M_PI / 3.0;
  Matrix omega = correlation_from_angles(psi);
  CHECK(omega(1, 0) == doctest::Approx(0.5).epsilon(1e-14));

  psi(2, 1) = 0.001;  // below the epsilon bound
  CHECK_THROWS_AS(angles_to_cholesky(psi), domain_error);
}

TEST_CASE("angles roundtrip on random correlation matrices") {
  RngStream rng(2024, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform() * 4);
    AngleSet psi(d);
    for (int k = 0; k < psi.count(); ++k) {
      auto [lo, hi] = psi.bounds(k);
      // keep within the narrow range so the recovered angles stay in bounds
      psi.flat(k) = 0.2 + (M_PI - 0.4) * rng.uniform();
    }
    Matrix omega = correlation_from_angles(psi);
    AngleSet back = corr_to_angles(omega);
    REQUIRE(back.count() == psi.count());
    for (int k = 0; k < psi.count(); ++k)
      CHECK(back.flat(k) == doctest::Approx(psi.flat(k)).epsilon(1e-10));
  }
}

TEST_CASE("corr_to_angles on the simulation-design correlation") {
  Matrix om = test::dgp_omega();
  AngleSet psi = corr_to_angles(om);
  Matrix round = correlation_from_angles(psi);
  CHECK((round - om).cwiseAbs().maxCoeff() < 1e-10);

  AngleSet id3 = corr_to_angles(Matrix::Identity(3, 3));
  for (int k = 0; k < id3.count(); ++k)
    CHECK(id3.flat(k) == doctest::Approx(M_PI_2).epsilon(1e-14));

  Matrix bad = Matrix::Constant(3, 3, 1.0);
  CHECK_THROWS_AS(corr_to_angles(bad), decomposition_error);
}

TEST_CASE("student t cdf closed forms and quadrature oracle") {
  CHECK(student_t_cdf(0.0, 1.0, 7.3) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(student_t_cdf(1.0, 1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-12));  // Cauchy

  // oracle: adaptive quadrature of the t density
  const double nu = 10.0, x = 1.8125;
  auto pdf = [&](double t) { return student_t_pdf(t, 1.0, nu); };
  const double left = 0.5;  // symmetry at zero
  const double oracle = left + test::adaptive_simpson(pdf, 0.0, x, 1e-12);
  CHECK(student_t_cdf(x, 1.0, nu) == doctest::Approx(oracle).epsilon(1e-8));

  CHECK_THROWS_AS(student_t_cdf(0.5, 1.0, -1.0), domain_error);
  CHECK(student_t_cdf(2.0, 4.0, kInf) == doctest::Approx(normal_cdf(1.0)).epsilon(1e-14));
}

TEST_CASE("student t quantile roundtrips") {
  CHECK(student_t_quantile(0.5, 1.0, 5.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(student_t_quantile(0.75, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double u : {0.975, 0.2, 0.9999, 1e-6}) {
    const double z = student_t_quantile(u, 1.0, 10.0);
    CHECK(student_t_cdf(z, 1.0, 10.0) == doctest::Approx(u).epsilon(1e-10));
  }
  CHECK_THROWS_AS(student_t_quantile(0.0, 1.0, 5.0), domain_error);
  CHECK_THROWS_AS(student_t_quantile(1.0, 1.0, 5.0), domain_error);
}

TEST_CASE("bivariate and trivariate normal cdf") {
  // independence
  CHECK(bvn_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  // closed-form orthant at rho = 0.5
  CHECK(bvn_cdf(0.0, 0.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // margins
  CHECK(bvn_cdf(0.7, 30.0, 0.3) == doctest::Approx(normal_cdf(0.7)).epsilon(1e-12));

  Matrix r(3, 3);
  r << 1.0, 0.4, -0.2, 0.4, 1.0, 0.3, -0.2, 0.3, 1.0;
  CHECK(tvn_cdf(Vector::Zero(3), r) == doctest::Approx(orthant_zero(r)).epsilon(1e-9));

  // oracle: conditioning quadrature vs plain MC
  RngStream rng(11, 3);
  Matrix chol = cholesky_or_throw(r, "test");
  Vector b(3);
  b << 0.5, -0.3, 1.1;
  int hits = 0;
  const int n = 2000000;
  for (int i = 0; i < n; ++i) {
    Vector e(3);
    for (int k = 0; k < 3; ++k) e(k) = rng.normal();
    Vector x = chol * e;
    if ((x.array() <= b.array()).all()) ++hits;
  }
  const double mc = static_cast<double>(hits) / n;
  const double se = std::sqrt(mc * (1 - mc) / n);
  CHECK(std::abs(tvn_cdf(b, r) - mc) < 4.0 * se);
}

TEST_CASE("small-dimension t cdf against scale-mixture oracle") {
  Matrix r(2, 2);
  r << 1.0, -0.35, -0.35, 1.0;
  SmallTCdf t2(6.0);
  // oracle: integrate Phi_2(s x) over the chi2 mixing density by adaptive
  // quadrature in the probability scale
  auto oracle = [&](double x1, double x2) {
    auto f = [&](double u) {
      const double s = std::sqrt(chi2_scale_quantile(std::clamp(u, 1e-14, 1.0 - 1e-14), 6.0));
      return bvn_cdf(s * x1, s * x2, -0.35);
    };
    return test::adaptive_simpson(f, 1e-12, 1.0 - 1e-12, 1e-12);
  };
  for (auto [x1, x2] : {std::pair{0.3, -0.8}, {2.0, 1.0}, {-1.5, -2.5}, {0.0, 0.0}}) {
    Vector x(2);
    x << x1, x2;
    CHECK(t2.cdf(x, r) == doctest::Approx(oracle(x1, x2)).epsilon(1e-8));
  }
  // df-free orthant at zero
  CHECK(t2.cdf(Vector::Zero(2), r) == doctest::Approx(orthant_zero(r)).epsilon(1e-9));
}

TEST_CASE("gamma sampler moments and KS") {
  RngStream rng(7, 1);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_gamma(5.0, 5.0, rng);
  const double mean = sum / n;
  const double se = std::sqrt((5.0 / 25.0) / n);
  CHECK(std::abs(mean - 1.0) < 4.0 * se);

  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = sample_gamma(3.0, 0.2, rng);
    s1 += g;
    s2 += g * g;
  }
  const double var = s2 / n - (s1 / n) * (s1 / n);
  // var of the variance estimator for Gamma(3, .2): use 4 sigma with the
  // large-n normal approximation through the fourth moment
  const double var_true = 3.0 / 0.04;
  const double kurt = 3.0 + 6.0 / 3.0;
  const double se_var = var_true * std::sqrt((kurt - 1.0) / n);
  CHECK(std::abs(var - var_true) < 4.0 * se_var);

  std::vector<double> draws(100000);
  for (auto& v : draws) v = sample_gamma(2.5, 1.7, rng);
  double p = test::ks_p_value_quadrature(
      draws, [](double t) { return t > 0 ? std::exp(gamma_log_pdf(t, 2.5, 1.7)) : 0.0; },
      0.0);
  CHECK(p > 0.001);

  CHECK_THROWS_AS(sample_gamma(-1.0, 1.0, rng), domain_error);
}

TEST_CASE("truncated normal sampler") {
  RngStream rng(99, 5);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_trunc_normal_lower(0.0, 1.0, rng);
  const double half_normal_mean = std::sqrt(2.0 / M_PI);
  const double half_normal_var = 1.0 - 2.0 / M_PI;
  CHECK(std::abs(sum / n - half_normal_mean) < 4.0 * std::sqrt(half_normal_var / n));

  // negligible truncation: matches the untruncated normal
  std::vector<double> far(100000);
  for (auto& v : far) v = sample_trunc_normal_lower(10.0, 1.0, rng);
  double p = test::ks_p_value(far, [](double x) { return normal_cdf(x - 10.0); });
  CHECK(p > 0.001);

  // deep tail: inverse-Mills moment oracle for mean -3, var 1
  const double a = 3.0;  // standardized bound
  const double mills = normal_pdf(a) / normal_cdf(-a);
  const double mean_true = -3.0 + mills;
  const double var_true = 1.0 + a * mills - mills * mills;
  double s = 0.0;
  const int m = 400000;
  for (int i = 0; i < m; ++i) s += sample_trunc_normal_lower(-3.0, 1.0, rng);
  CHECK(std::abs(s / m - mean_true) < 4.0 * std::sqrt(var_true / m));

  CHECK_THROWS_AS(sample_trunc_normal_lower(0.0, 0.0, rng), domain_error);
}

TEST_CASE("rng streams reproduce and separate") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.raw() == b.raw());
  }
  bool differs = false;
  RngStream a2(42, 7);
  for (int i = 0; i < 100; ++i)
    if (a2.raw() != c.raw()) differs = true;
  CHECK(differs);
}

TEST_SUITE_END();
