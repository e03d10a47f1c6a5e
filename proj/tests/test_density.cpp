#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "trust/density.hpp"
#include "trust/errors.hpp"
#include "trust/rng.hpp"
#include "trust/student_t.hpp"

using namespace trust;

TEST_SUITE_BEGIN("density");

TEST_CASE("symmetric reduction to the multivariate t") {
  Matrix om = test::dgp_omega();
  TrustParams p = TrustParams::make(om, Matrix::Zero(3, 2), 7.0);
  RngStream rng(3, 2);
  for (int t = 0; t < 20; ++t) {
    Vector z(3);
    for (int i = 0; i < 3; ++i) z(i) = 3.0 * rng.normal();
    // T_1(0) = 1/2 per factor cancels T_q(0; I, nu) = 2^{-q} exactly
    CHECK(log_pdf_joint(z, p) == doctest::Approx(log_mvt_pdf(z, om, 7.0)).epsilon(1e-13));
  }
}

TEST_CASE("reflection symmetry f(z; A) = f(-z; -A)") {
  Matrix om = test::dgp_omega();
  TrustParams pp = TrustParams::make(om, test::dgp2_alpha(), 10.0);
  TrustParams pm = TrustParams::make(om, (-test::dgp2_alpha()).eval(), 10.0);
  RngStream rng(4, 2);
  for (int t = 0; t < 20; ++t) {
    Vector z(3);
    for (int i = 0; i < 3; ++i) z(i) = 3.0 * rng.normal();
    CHECK(log_pdf_joint(z, pp) == doctest::Approx(log_pdf_joint((-z).eval(), pm)).epsilon(1e-12));
  }
}

TEST_CASE("permutation invariance of the joint density") {
  Matrix om = test::dgp_omega();
  Matrix a = test::dgp2_alpha();
  Matrix swapped(3, 2);
  swapped.col(0) = a.col(1);
  swapped.col(1) = a.col(0);
  TrustParams p1 = TrustParams::make(om, a, 10.0);
  TrustParams p2 = TrustParams::make(om, swapped, 10.0);
  RngStream rng(5, 2);
  for (int t = 0; t < 20; ++t) {
    Vector z(3);
    for (int i = 0; i < 3; ++i) z(i) = 3.0 * rng.normal();
    CHECK(log_pdf_joint(z, p1) == doctest::Approx(log_pdf_joint(z, p2)).epsilon(1e-12));
  }
}

TEST_CASE("joint density integrates to one (bivariate quadrature oracle)") {
  auto [om, a] = test::fig1_set(0, 0);  // strongest-skew corner case
  TrustParams p = TrustParams::make(om, a, 5.0);
  auto f = [&](double x, double y) {
    Vector z(2);
    z << x, y;
    return std::exp(log_pdf_joint(z, p));
  };
  const double mass = test::integrate_2d(f, -10.0, 10.0, -10.0, 10.0, 120);
  CHECK(std::abs(mass - 1.0) < 1e-3);
}

TEST_CASE("q=1 equivalence with a direct skew-t implementation") {
  Matrix om = test::dgp_omega();
  Matrix a = test::dgp1_alpha();
  TrustParams p = TrustParams::make(om, a, 10.0);
  const double nu = 10.0;
  Eigen::LLT<Matrix> llt(om);
  Matrix l = llt.matrixL();
  const double log_det = 2.0 * Matrix(l).diagonal().array().log().sum();

  // direct transcription of the q=1 density with its own pieces
  auto direct = [&](const Vector& z) {
    const double q_form = l.triangularView<Eigen::Lower>().solve(z).squaredNorm();
    const double log_t = std::lgamma(0.5 * (nu + 3)) - std::lgamma(0.5 * nu) -
                         1.5 * std::log(nu * M_PI) - 0.5 * log_det -
                         0.5 * (nu + 3) * std::log1p(q_form / nu);
    const double arg = std::sqrt((nu + 3) / (nu + q_form)) * a.col(0).dot(z);
    return log_t + std::log(2.0) + std::log(student_t_cdf(arg, 1.0, nu + 3));
  };
  RngStream rng(6, 2);
  for (int t = 0; t < 100; ++t) {
    Vector z(3);
    for (int i = 0; i < 3; ++i) z(i) = 2.0 + 2.0 * rng.normal();
    CHECK(log_pdf_joint(z, p) == doctest::Approx(direct(z)).epsilon(1e-10));
  }
}

TEST_CASE("marginal density: symmetric case and normalization") {
  Matrix om = test::dgp_omega();
  TrustParams p0 = TrustParams::make(om, Matrix::Zero(3, 2), 9.0);
  for (double z : {-2.0, 0.0, 1.3}) {
    CHECK(log_pdf_marginal(z, 1, p0) ==
          doctest::Approx(student_t_log_pdf(z, 1.0, 9.0)).epsilon(1e-12));
  }

  TrustParams p = TrustParams::make(om, test::dgp2_alpha(), 10.0);
  for (int j = 0; j < 3; ++j) {
    auto f = [&](double z) { return std::exp(log_pdf_marginal(z, j, p)); };
    const double mass = test::adaptive_simpson(f, -80.0, 80.0, 1e-9);
    CHECK(std::abs(mass - 1.0) < 1e-4);
  }
}

TEST_CASE("marginal matches quadrature of the bivariate joint") {
  auto [om, a] = test::fig1_set(2, 1);
  TrustParams p = TrustParams::make(om, a, 5.0);
  for (double zj : {-1.0, -0.2, 0.5, 1.1, 2.4}) {
    auto f = [&](double z2) {
      Vector z(2);
      z << zj, z2;
      return std::exp(log_pdf_joint(z, p));
    };
    const double oracle = test::adaptive_simpson(f, -90.0, 90.0, 1e-10);
    CHECK(std::exp(log_pdf_marginal(zj, 0, p)) == doctest::Approx(oracle).epsilon(1e-4));
  }
}

TEST_CASE("extended density reductions and normalization") {
  Matrix om = test::dgp_omega();
  TrustParams p = TrustParams::make(om, test::dgp2_alpha(), 10.0);
  RngStream rng(7, 2);
  for (int t = 0; t < 10; ++t) {
    Vector z(3);
    for (int i = 0; i < 3; ++i) z(i) = 2.0 * rng.normal();
    CHECK(log_pdf_extended(z, p, Vector::Zero(2)) ==
          doctest::Approx(log_pdf_joint(z, p)).epsilon(1e-12));
    // tau -> +inf removes the truncation entirely
    Vector tau_big = Vector::Constant(2, 20.0);
    CHECK(std::abs(std::exp(log_pdf_extended(z, p, tau_big)) -
                   std::exp(log_mvt_pdf(z, om, 10.0))) < 1e-6);
  }

  // d=2, q=1, tau = 0.5 normalization
  Matrix om2(2, 2);
  om2 << 1.0, 0.4, 0.4, 1.0;
  Matrix a2(2, 1);
  a2 << 3.0, -2.0;
  TrustParams pe = TrustParams::make(om2, a2, 6.0);
  Vector tau(1);
  tau << 0.5;
  auto f = [&](double x, double y) {
    Vector z(2);
    z << x, y;
    return std::exp(log_pdf_extended(z, pe, tau));
  };
  const double mass = test::integrate_2d(f, -12.0, 12.0, -12.0, 12.0, 120);
  CHECK(std::abs(mass - 1.0) < 1e-3);
}

TEST_CASE("conditional density against the Bayes-ratio oracle") {
  auto [om, a] = test::fig1_set(2, 2);
  TrustParams p = TrustParams::make(om, a, 5.0);
  std::vector<int> idx1 = {0}, idx2 = {1};
  for (double z2 : {-0.8, 0.3, 1.7}) {
    for (double z1 : {-1.2, 0.4, 2.2}) {
      Vector v1(1), v2(1);
      v1 << z1;
      v2 << z2;
      Vector z(2);
      z << z1, z2;
      const double oracle = log_pdf_joint(z, p) - log_pdf_marginal(z2, 1, p);
      CHECK(log_pdf_conditional(v1, v2, idx1, idx2, p) ==
            doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("conditional of the symmetric case is the closed-form t conditional") {
  Matrix om = test::dgp_omega();
  TrustParams p = TrustParams::make(om, Matrix(3, 0), 8.0);
  std::vector<int> idx1 = {0, 2}, idx2 = {1};
  Vector z2(1);
  z2 << 0.7;
  Matrix om1(2, 2), om12(2, 1), om2(1, 1);
  om1 << om(0, 0), om(0, 2), om(2, 0), om(2, 2);
  om12 << om(0, 1), om(2, 1);
  om2 << om(1, 1);
  Vector mu_star = om12 * (z2 / om2(0, 0));
  Matrix om_star = om1 - om12 * om12.transpose() / om2(0, 0);
  const double q2 = z2(0) * z2(0) / om2(0, 0);
  RngStream rng(8, 2);
  for (int t = 0; t < 10; ++t) {
    Vector z1(2);
    z1 << 2.0 * rng.normal(), 2.0 * rng.normal();
    const double oracle =
        log_mvt_pdf(z1 - mu_star, ((8.0 + q2) / 9.0) * om_star, 9.0);
    CHECK(log_pdf_conditional(z1, z2, idx1, idx2, p) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("conditional integrates to one") {
  auto [om, a] = test::fig1_set(0, 1);
  TrustParams p = TrustParams::make(om, a, 5.0);
  std::vector<int> idx1 = {0}, idx2 = {1};
  Vector z2(1);
  z2 << -0.6;
  auto f = [&](double z) {
    Vector v(1);
    v << z;
    return std::exp(log_pdf_conditional(v, z2, idx1, idx2, p));
  };
  const double mass = test::adaptive_simpson(f, -60.0, 60.0, 1e-9);
  CHECK(std::abs(mass - 1.0) < 1e-3);
}

TEST_CASE("location-scale density") {
  Matrix om = test::dgp_omega();
  TrustParams p = TrustParams::make(om, test::dgp1_alpha(), 10.0);
  Vector z(3);
  z << 0.3, -1.1, 0.9;
  Vector mu0 = Vector::Zero(3), s1 = Vector::Ones(3);
  CHECK(log_pdf_location_scale(z, mu0, s1, p) ==
        doctest::Approx(log_pdf_joint(z, p)).epsilon(1e-14));

  Vector mu(3), s(3);
  mu << 1.0, -2.0, 0.5;
  s << 0.5, 2.0, 1.5;
  Vector y = mu + z.cwiseProduct(s);
  Vector y2 = mu + z.cwiseProduct(2.0 * s);
  const double a1 = log_pdf_location_scale(y, mu, s, p);
  const double a2 = log_pdf_location_scale(y2, mu, (2.0 * s).eval(), p);
  CHECK(a1 - a2 == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));

  Vector bad_s(3);
  bad_s << 1.0, -1.0, 1.0;
  CHECK_THROWS_AS(log_pdf_location_scale(y, mu, bad_s, p), domain_error);
}

TEST_CASE("gaussian limit branch") {
  Matrix om = test::dgp_omega();
  TrustParams pg = TrustParams::make(om, test::dgp1_alpha(), kInf);
  CHECK(pg.gaussian());
  // against a direct skew-normal transcription
  Eigen::LLT<Matrix> llt(om);
  Matrix l = llt.matrixL();
  const double log_det = 2.0 * Matrix(l).diagonal().array().log().sum();
  RngStream rng(9, 2);
  for (int t = 0; t < 10; ++t) {
    Vector z(3);
    for (int i = 0; i < 3; ++i) z(i) = 1.5 * rng.normal();
    const double quad = l.triangularView<Eigen::Lower>().solve(z).squaredNorm();
    const double oracle = -1.5 * std::log(2.0 * M_PI) - 0.5 * log_det - 0.5 * quad +
                          std::log(2.0) + normal_log_cdf(test::dgp1_alpha().col(0).dot(z));
    CHECK(log_pdf_joint(z, pg) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_SUITE_END();
