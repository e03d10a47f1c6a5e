#include "trust/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trust/density.hpp"
#include "trust/errors.hpp"
#include "trust/mvsmall.hpp"

namespace trust {

namespace {

// Bivariate marginal pieces for a pair (i, j): 2x2 omega block and the two
// delta columns, with the full Sigma (Lemma-4 marginalization keeps Sigma).
struct PairBlocks {
  Matrix omega;  // 2x2
  Matrix delta;  // q x 2
};

PairBlocks pair_blocks(const TrustParams& p, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= p.d() || j >= p.d())
    throw domain_error("pair indices must be distinct and in range");
  PairBlocks b;
  b.omega.resize(2, 2);
  b.omega << 1.0, p.omega()(i, j), p.omega()(i, j), 1.0;
  b.delta.resize(p.q(), 2);
  if (p.q() > 0) {
    b.delta.col(0) = p.delta().col(i);
    b.delta.col(1) = p.delta().col(j);
  }
  return b;
}

double orthant_or_qmc(const Matrix& s, const QmcOptions& opts, RngStream& rng) {
  if (s.rows() <= 3) return orthant_zero(s);
  return mvn_cdf(Vector::Zero(s.rows()), s, opts, rng).value;
}

}  // namespace

Matrix pseudo_observations(const Matrix& y) {
  const int n = static_cast<int>(y.rows());
  const int d = static_cast<int>(y.cols());
  if (n < 2) throw validation_error("pseudo_observations: need at least two rows");
  if (!y.allFinite()) throw validation_error("pseudo_observations: missing or non-finite values");
  Matrix u(n, d);
  std::vector<int> idx(n);
  for (int j = 0; j < d; ++j) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return y(a, j) < y(b, j); });
    if (y(idx.front(), j) == y(idx.back(), j))
      throw validation_error("pseudo_observations: column " + std::to_string(j + 1) +
                             " is constant");
    int start = 0;
    while (start < n) {
      int stop = start;
      while (stop + 1 < n && y(idx[stop + 1], j) == y(idx[start], j)) ++stop;
      const double avg_rank = 0.5 * (start + stop) + 1.0;  // average of 1-based ranks
      for (int k = start; k <= stop; ++k) u(idx[k], j) = avg_rank / (n + 1.0);
      start = stop + 1;
    }
  }
  return u;
}

double copula_log_density(const Vector& u, const TrustParams& p) {
  if (u.size() != p.d()) throw domain_error("copula_log_density: dimension mismatch");
  if ((u.array() <= 0.0).any() || (u.array() >= 1.0).any())
    throw domain_error("copula_log_density: u must lie strictly inside (0,1)");
  auto grid = std::make_shared<EnvelopeGrid>(p.nu());
  Vector z(p.d());
  double marg = 0.0;
  for (int j = 0; j < p.d(); ++j) {
    MarginalTable tab(p, j, grid);
    z(j) = tab.quantile(u(j));
    marg += log_pdf_marginal(z(j), j, p);
  }
  return log_pdf_joint(z, p) - marg;
}

double kendall(const TrustParams& p, int i, int j, const QmcOptions& opts, RngStream& rng) {
  PairBlocks b = pair_blocks(p, i, j);
  const int q = p.q();
  const int m = 2 + 2 * q;
  Matrix rk = Matrix::Zero(m, m);
  rk.topLeftCorner(2, 2) = 2.0 * b.omega;
  if (q > 0) {
    Matrix dk(2 * q, 2);
    dk.topRows(q) = b.delta;
    dk.bottomRows(q) = -b.delta;
    rk.bottomLeftCorner(2 * q, 2) = dk;
    rk.topRightCorner(2, 2 * q) = dk.transpose();
    rk.block(2, 2, q, q) = p.sigma();
    rk.block(2 + q, 2 + q, q, q) = p.sigma();
  }
  if (!is_positive_definite(rk)) throw constraint_error("kendall: R_K not positive definite");
  const double num = orthant_or_qmc(rk, opts, rng);
  const double den = p.q() > 0 ? p.orthant_sigma() : 1.0;
  return 4.0 * num / (den * den) - 1.0;
}

double spearman(const TrustParams& p, int i, int j, const QmcOptions& opts, RngStream& rng) {
  PairBlocks b = pair_blocks(p, i, j);
  const int q = p.q();
  const int m = 2 + 3 * q;
  Matrix rs = Matrix::Zero(m, m);
  rs.topLeftCorner(2, 2) = b.omega + Matrix::Identity(2, 2);
  if (q > 0) {
    Matrix ds = Matrix::Zero(3 * q, 2);
    ds.topRows(q) = b.delta;
    ds.block(q, 0, q, 1) = -b.delta.col(0);
    ds.block(2 * q, 1, q, 1) = -b.delta.col(1);
    rs.bottomLeftCorner(3 * q, 2) = ds;
    rs.topRightCorner(2, 3 * q) = ds.transpose();
    for (int blk = 0; blk < 3; ++blk) rs.block(2 + blk * q, 2 + blk * q, q, q) = p.sigma();
  }
  if (!is_positive_definite(rs)) throw constraint_error("spearman: R_S not positive definite");
  const double num = orthant_or_qmc(rs, opts, rng);
  const double den = p.q() > 0 ? p.orthant_sigma() : 1.0;
  return 12.0 * num / (den * den * den) - 3.0;
}

namespace {

double copula_cdf_at_z(double z1, double z2, const TrustParams& p, const PairBlocks& b,
                       const QmcOptions& opts, RngStream& rng) {
  const int q = p.q();
  Matrix rstar(2 + q, 2 + q);
  rstar.topLeftCorner(2, 2) = b.omega;
  if (q > 0) {
    rstar.topRightCorner(2, q) = -b.delta.transpose();
    rstar.bottomLeftCorner(q, 2) = -b.delta;
    rstar.bottomRightCorner(q, q) = p.sigma();
  }
  Vector x = Vector::Zero(2 + q);
  x(0) = z1;
  x(1) = z2;
  const double num = mvt_cdf(x, rstar, p.nu(), opts, rng).value;
  const double den = q > 0 ? p.orthant_sigma() : 1.0;
  return std::clamp(num / den, 0.0, 1.0);
}

}  // namespace

double bivariate_copula_cdf(double u1, double u2, const TrustParams& p, int i, int j,
                            const QmcOptions& opts, RngStream& rng) {
  if (!(u1 > 0.0 && u1 < 1.0 && u2 > 0.0 && u2 < 1.0))
    throw domain_error("bivariate_copula_cdf: arguments must lie in (0,1)");
  PairBlocks b = pair_blocks(p, i, j);
  auto grid = std::make_shared<EnvelopeGrid>(p.nu());
  const double z1 = MarginalTable(p, i, grid).quantile(u1);
  const double z2 = MarginalTable(p, j, grid).quantile(u2);
  return copula_cdf_at_z(z1, z2, p, b, opts, rng);
}

QuantileDependence quantile_dependence(const TrustParams& p, int i, int j, double kappa,
                                       const QmcOptions& opts, RngStream& rng) {
  if (!(kappa > 0.0 && kappa <= 0.5))
    throw domain_error("quantile_dependence: kappa must lie in (0, 0.5]");
  PairBlocks b = pair_blocks(p, i, j);
  auto grid = std::make_shared<EnvelopeGrid>(p.nu());
  MarginalTable ti(p, i, grid), tj(p, j, grid);
  const double zi_lo = ti.quantile(kappa), zi_hi = ti.quantile(1.0 - kappa);
  const double zj_lo = tj.quantile(kappa), zj_hi = tj.quantile(1.0 - kappa);

  const double c_ll = copula_cdf_at_z(zi_lo, zj_lo, p, b, opts, rng);
  const double c_hh = copula_cdf_at_z(zi_hi, zj_hi, p, b, opts, rng);
  const double c_lh = copula_cdf_at_z(zi_lo, zj_hi, p, b, opts, rng);
  const double c_hl = copula_cdf_at_z(zi_hi, zj_lo, p, b, opts, rng);

  QuantileDependence lam;
  lam.ll = c_ll / kappa;
  lam.ur = (1.0 - 2.0 * (1.0 - kappa) + c_hh) / kappa;
  lam.lr = (kappa - c_lh) / kappa;
  lam.ul = (kappa - c_hl) / kappa;
  auto clip = [](double v) { return std::clamp(v, 0.0, 1.0); };
  lam.ll = clip(lam.ll);
  lam.ur = clip(lam.ur);
  lam.lr = clip(lam.lr);
  lam.ul = clip(lam.ul);
  return lam;
}

AsymmetryMeasures asymmetry_measures(const QuantileDependence& lam) {
  return {lam.ur - lam.ll, lam.ul - lam.lr};
}

LogScoreResult log_score(const Matrix& u_new, const PosteriorDraws& draws) {
  if (!draws.copula) throw domain_error("log_score: draws must come from a copula fit");
  if (draws.draws.empty()) throw domain_error("log_score: empty chain");
  LogScoreResult out;
  Theta point;
  try {
    point = posterior_mean_theta(draws);
    build_params(point, draws.prior.epsilon);
  } catch (const std::exception&) {
    auto it = std::max_element(draws.log_lik.begin(), draws.log_lik.end());
    point = draws.draws[static_cast<std::size_t>(it - draws.log_lik.begin())];
    out.plug_in_fallback = true;
  }
  TrustParams p = build_params(point, draws.prior.epsilon);
  const int n = static_cast<int>(u_new.rows());
  if (u_new.cols() != p.d()) throw validation_error("log_score: column count mismatch");
  auto grid = std::make_shared<EnvelopeGrid>(p.nu(), draws.cfg.grid_knots);
  std::vector<MarginalTable> tabs;
  tabs.reserve(p.d());
  for (int j = 0; j < p.d(); ++j) tabs.emplace_back(p, j, grid, draws.cfg.cheb_points);

  out.per_row.resize(n);
  out.cumulative.resize(n);
  double run = 0.0;
  Vector z(p.d());
  for (int i = 0; i < n; ++i) {
    double marg = 0.0;
    for (int j = 0; j < p.d(); ++j) {
      z(j) = tabs[j].quantile(u_new(i, j));
      marg += tabs[j].log_pdf(z(j));
    }
    out.per_row(i) = log_pdf_joint(z, p) - marg;
    run += out.per_row(i);
    out.cumulative(i) = run;
  }
  return out;
}

}  // namespace trust
