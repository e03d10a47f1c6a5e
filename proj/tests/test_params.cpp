#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "trust/density.hpp"
#include "trust/errors.hpp"
#include "trust/params.hpp"
#include "trust/rng.hpp"

using namespace trust;

TEST_SUITE_BEGIN("params");

TEST_CASE("delta_from_alpha on the simulation designs") {
  Matrix om = test::dgp_omega();

  CHECK(delta_from_alpha(om, Matrix::Zero(3, 2)).isZero(1e-15));

  Matrix d1 = delta_from_alpha(om, test::dgp1_alpha());
  CHECK(d1(0, 0) == doctest::Approx(-0.271).epsilon(2e-3));
  CHECK(d1(0, 1) == doctest::Approx(0.618).epsilon(2e-3));
  CHECK(d1(0, 2) == doctest::Approx(0.805).epsilon(2e-3));

  Matrix d2 = delta_from_alpha(om, test::dgp2_alpha());
  CHECK(d2(1, 0) == doctest::Approx(-0.868).epsilon(2e-3));
  CHECK(d2(1, 1) == doctest::Approx(-0.097).epsilon(2e-2));
  CHECK(d2(1, 2) == doctest::Approx(0.204).epsilon(2e-3));
}

TEST_CASE("alpha_from_delta inverts") {
  Matrix om = test::dgp_omega();
  CHECK(alpha_from_delta(om, Matrix::Zero(2, 3)).isZero(1e-15));

  // printed 3 d.p. deltas map back near the generating alphas
  Matrix delta(1, 3);
  delta << -0.271, 0.618, 0.805;
  Matrix a = alpha_from_delta(om, delta);
  CHECK(a(0, 0) == doctest::Approx(-5.0).epsilon(0.05));
  CHECK(a(1, 0) == doctest::Approx(3.0).epsilon(0.05));
  CHECK(a(2, 0) == doctest::Approx(5.0).epsilon(0.05));

  RngStream rng(31, 0);
  for (int t = 0; t < 25; ++t) {
    Matrix w(3, 6);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 6; ++j) w(i, j) = rng.normal();
    Matrix omega = to_correlation(w * w.transpose());
    Matrix alpha(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 2; ++k) alpha(i, k) = 3.0 * rng.normal();
    Matrix round = alpha_from_delta(omega, delta_from_alpha(omega, alpha));
    CHECK((round - alpha).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + alpha.cwiseAbs().maxCoeff()));
  }

  Matrix too_big(1, 3);
  too_big << 0.9, 0.9, 0.9;
  CHECK_THROWS_AS(alpha_from_delta(om, too_big), constraint_error);
}

TEST_CASE("sigma_from_delta and h_diag") {
  Matrix om = test::dgp_omega();
  CHECK(sigma_from_delta(om, Matrix::Zero(2, 3)).isApprox(Matrix::Identity(2, 2), 1e-15));
  CHECK(sigma_from_delta(om, delta_from_alpha(om, test::dgp1_alpha())).size() == 1);
  CHECK(sigma_from_delta(om, delta_from_alpha(om, test::dgp1_alpha()))(0, 0) == 1.0);

  // explicit matrix oracle for the DGP2 off-diagonal
  Matrix delta = delta_from_alpha(om, test::dgp2_alpha());
  Matrix oi = om.inverse();
  const double off_oracle = delta.row(0).dot(oi * delta.row(1).transpose());
  Matrix sigma = sigma_from_delta(om, delta);
  CHECK(sigma(0, 1) == doctest::Approx(off_oracle).epsilon(1e-12));
  CHECK(sigma(1, 0) == sigma(0, 1));
  CHECK(sigma(0, 0) == 1.0);

  Vector h = h_diag(om, delta);
  for (int k = 0; k < 2; ++k) {
    const double oracle = 1.0 - delta.row(k).dot(oi * delta.row(k).transpose());
    CHECK(h(k) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(h(k) > 0.0);
    CHECK(h(k) <= 1.0);
  }

  Matrix delta0 = Matrix::Zero(2, 3);
  CHECK(h_diag(om, delta0).isApproxToConstant(1.0, 1e-15));
}

TEST_CASE("TrustParams validation") {
  Matrix om = test::dgp_omega();
  TrustParams p = TrustParams::make(om, test::dgp2_alpha(), 10.0);
  CHECK(p.d() == 3);
  CHECK(p.q() == 2);
  CHECK(p.h_ascending());
  CHECK(p.orthant_sigma() == doctest::Approx(0.25 + std::asin(p.sigma()(0, 1)) / (2 * M_PI)));

  CHECK_THROWS_AS(TrustParams::make(om, test::dgp2_alpha(), -1.0), domain_error);
  Matrix not_corr = om * 2.0;
  CHECK_THROWS_AS(TrustParams::make(not_corr, test::dgp2_alpha(), 10.0), domain_error);

  // q = 0 symmetric case
  TrustParams p0 = TrustParams::make(om, Matrix(3, 0), 7.0);
  CHECK(p0.q() == 0);
  CHECK(p0.orthant_sigma() == 1.0);
}

TEST_CASE("identify sorts h ascending and is idempotent") {
  Matrix om = test::dgp_omega();

  // q=1: always the identity
  TrustParams p1 = TrustParams::make(om, test::dgp1_alpha(), 10.0);
  CHECK(identify(p1).alpha().isApprox(p1.alpha(), 1e-15));

  // swapped columns get restored
  Matrix swapped(3, 2);
  swapped.col(0) = test::dgp2_alpha().col(1);
  swapped.col(1) = test::dgp2_alpha().col(0);
  TrustParams ps = TrustParams::make(om, swapped, 10.0);
  CHECK(!ps.h_ascending());
  TrustParams fixed = identify(ps);
  CHECK(fixed.h_ascending());
  CHECK(fixed.alpha().isApprox(TrustParams::make(om, test::dgp2_alpha(), 10.0).alpha(), 1e-14));

  // density is invariant under the relabeling (the observable content of
  // permutation unidentifiability)
  RngStream rng(17, 1);
  for (int t = 0; t < 10; ++t) {
    Vector z(3);
    for (int i = 0; i < 3; ++i) z(i) = 2.5 * rng.normal();
    CHECK(log_pdf_joint(z, ps) == doctest::Approx(log_pdf_joint(z, fixed)).epsilon(1e-12));
  }

  TrustParams again = identify(fixed);
  CHECK(again.alpha().isApprox(fixed.alpha(), 1e-15));
  CHECK(again.h().isApprox(fixed.h(), 1e-15));
}

TEST_SUITE_END();
