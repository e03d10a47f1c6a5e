#include "trust/params.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trust/errors.hpp"
#include "trust/mvsmall.hpp"
#include "trust/student_t.hpp"

namespace trust {

Matrix delta_from_alpha(const Matrix& omega, const Matrix& alpha) {
  const int d = static_cast<int>(omega.rows());
  const int q = static_cast<int>(alpha.cols());
  if (alpha.rows() != d) throw domain_error("delta_from_alpha: alpha must be d x q");
  cholesky_or_throw(omega, "delta_from_alpha");
  Matrix delta(q, d);
  for (int k = 0; k < q; ++k) {
    Vector oa = omega * alpha.col(k);
    double norm2 = 1.0 + alpha.col(k).dot(oa);
    delta.row(k) = (oa / std::sqrt(norm2)).transpose();
  }
  return delta;
}

Matrix alpha_from_delta(const Matrix& omega, const Matrix& delta) {
  const int d = static_cast<int>(omega.rows());
  const int q = static_cast<int>(delta.rows());
  if (delta.cols() != d) throw domain_error("alpha_from_delta: delta must be q x d");
  Eigen::LLT<Matrix> llt(omega);
  if (llt.info() != Eigen::Success)
    throw decomposition_error("alpha_from_delta: omega not positive definite");
  Matrix alpha(d, q);
  for (int k = 0; k < q; ++k) {
    Vector oid = llt.solve(delta.row(k).transpose());
    double r = 1.0 - delta.row(k).dot(oid);
    if (!(r > 0.0))
      throw constraint_error("alpha_from_delta: delta_k' Omega^{-1} delta_k >= 1");
    alpha.col(k) = oid / std::sqrt(r);
  }
  return alpha;
}

Matrix sigma_from_delta(const Matrix& omega, const Matrix& delta) {
  const int q = static_cast<int>(delta.rows());
  Eigen::LLT<Matrix> llt(omega);
  if (llt.info() != Eigen::Success)
    throw decomposition_error("sigma_from_delta: omega not positive definite");
  Matrix m = delta * llt.solve(delta.transpose());
  m = 0.5 * (m + m.transpose()).eval();
  Matrix sigma = Matrix::Identity(q, q) + (m - Matrix(m.diagonal().asDiagonal()));
  if (q > 0 && !is_positive_definite(sigma))
    throw constraint_error("sigma_from_delta: Sigma not positive definite");
  return sigma;
}

Vector h_diag(const Matrix& omega, const Matrix& delta) {
  const int q = static_cast<int>(delta.rows());
  Eigen::LLT<Matrix> llt(omega);
  if (llt.info() != Eigen::Success)
    throw decomposition_error("h_diag: omega not positive definite");
  Vector h(q);
  for (int k = 0; k < q; ++k) {
    h(k) = 1.0 - delta.row(k).dot(llt.solve(delta.row(k).transpose()));
    if (!(h(k) > 0.0)) throw constraint_error("h_diag: h_k <= 0");
  }
  return h;
}

std::vector<int> h_order(const Vector& h) {
  std::vector<int> order(h.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return h(a) < h(b); });
  return order;
}

bool TrustParams::gaussian() const { return nu_ == kInf; }

double TrustParams::quad_omega(const Vector& z) const {
  Vector v = omega_chol_.triangularView<Eigen::Lower>().solve(z);
  return v.squaredNorm();
}

TrustParams TrustParams::make(Matrix omega, Matrix alpha, double nu) {
  TrustParams p;
  p.d_ = static_cast<int>(omega.rows());
  p.q_ = static_cast<int>(alpha.cols());
  if (omega.cols() != p.d_ || p.d_ < 1) throw domain_error("TrustParams: omega must be square");
  if (alpha.rows() != p.d_ && p.q_ > 0)
    throw domain_error("TrustParams: alpha must have d rows");
  if (!(nu > 0.0)) throw domain_error("TrustParams: nu must be positive");
  if (!omega.diagonal().isApproxToConstant(1.0, 1e-8))
    throw domain_error("TrustParams: omega must have unit diagonal");
  if (!alpha.allFinite()) throw domain_error("TrustParams: alpha must be finite");

  p.nu_ = nu;
  p.omega_ = std::move(omega);
  p.alpha_ = (p.q_ > 0) ? std::move(alpha) : Matrix(p.d_, 0);

  Eigen::LLT<Matrix> llt(p.omega_);
  if (llt.info() != Eigen::Success)
    throw decomposition_error("TrustParams: omega not positive definite");
  p.omega_chol_ = llt.matrixL();
  p.omega_inv_ = llt.solve(Matrix::Identity(p.d_, p.d_));
  p.log_det_omega_ = log_det_from_cholesky(p.omega_chol_);

  p.delta_ = delta_from_alpha(p.omega_, p.alpha_);
  p.sigma_ = sigma_from_delta(p.omega_, p.delta_);
  p.h_ = h_diag(p.omega_, p.delta_);
  p.h_ascending_ = std::is_sorted(p.h_.begin(), p.h_.end());

  if (p.q_ > 0) {
    Eigen::LLT<Matrix> slt(p.sigma_);
    if (slt.info() != Eigen::Success)
      throw constraint_error("TrustParams: Sigma not positive definite");
    p.sigma_chol_ = slt.matrixL();
    p.sigma_inv_ = slt.solve(Matrix::Identity(p.q_, p.q_));
    p.log_det_sigma_ = log_det_from_cholesky(p.sigma_chol_);
    p.cross_ = p.delta_.transpose() * p.sigma_inv_;
    p.cond_cov_ = p.omega_ - p.cross_ * p.delta_;

    // Full (d+q) block correlation matrix must itself be PD.
    Matrix r(p.d_ + p.q_, p.d_ + p.q_);
    r.topLeftCorner(p.d_, p.d_) = p.omega_;
    r.topRightCorner(p.d_, p.q_) = p.delta_.transpose();
    r.bottomLeftCorner(p.q_, p.d_) = p.delta_;
    r.bottomRightCorner(p.q_, p.q_) = p.sigma_;
    if (!is_positive_definite(r))
      throw constraint_error("TrustParams: block correlation matrix R not positive definite");

    Eigen::LLT<Matrix> clt(p.cond_cov_);
    if (clt.info() != Eigen::Success)
      throw constraint_error("TrustParams: Omega - Delta' Sigma^{-1} Delta not positive definite");
    p.cond_chol_ = clt.matrixL();
    p.log_det_cond_ = log_det_from_cholesky(p.cond_chol_);
    p.orthant_sigma_ = (p.q_ <= 3) ? orthant_zero(p.sigma_) : -1.0;
    if (p.orthant_sigma_ < 0.0)
      throw domain_error("TrustParams: latent dimension q <= 3 supported");
  } else {
    p.sigma_ = Matrix(0, 0);
    p.sigma_chol_ = Matrix(0, 0);
    p.sigma_inv_ = Matrix(0, 0);
    p.cross_ = Matrix(p.d_, 0);
    p.cond_cov_ = p.omega_;
    p.cond_chol_ = p.omega_chol_;
    p.log_det_cond_ = p.log_det_omega_;
    p.orthant_sigma_ = 1.0;
  }
  return p;
}

std::pair<TrustParams, std::vector<int>> identify_with_order(const TrustParams& p) {
  std::vector<int> order = h_order(p.h());
  bool sorted = std::is_sorted(order.begin(), order.end());
  if (sorted && p.h_ascending()) return {p, order};
  Matrix alpha(p.d(), p.q());
  for (int k = 0; k < p.q(); ++k) alpha.col(k) = p.alpha().col(order[k]);
  return {TrustParams::make(p.omega(), std::move(alpha), p.nu()), order};
}

TrustParams identify(const TrustParams& p) { return identify_with_order(p).first; }

}  // namespace trust
