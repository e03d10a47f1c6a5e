#pragma once

#include <vector>

#include "trust/angles.hpp"
#include "trust/matrix.hpp"

namespace trust {

// delta_k = (1 + alpha_k' Omega alpha_k)^{-1/2} Omega alpha_k, column-wise.
// Returns Delta as q x d with rows delta_k'.
Matrix delta_from_alpha(const Matrix& omega, const Matrix& alpha);

// Inverse map; throws constraint_error when delta_k' Omega^{-1} delta_k >= 1.
Matrix alpha_from_delta(const Matrix& omega, const Matrix& delta);

// Sigma = I_q + (M - diag(M)), M = Delta Omega^{-1} Delta'. Throws
// constraint_error when the result is not PD.
Matrix sigma_from_delta(const Matrix& omega, const Matrix& delta);

// h_k = 1 - delta_k' Omega^{-1} delta_k; throws constraint_error when any
// h_k <= 0.
Vector h_diag(const Matrix& omega, const Matrix& delta);

// Stable ascending permutation of h.
std::vector<int> h_order(const Vector& h);

// Identified parameter bundle {Omega, A, nu} with its derived quantities,
// immutable after construction. nu may be kInf for the Gaussian limit.
class TrustParams {
 public:
  // Validates and derives everything eagerly. Throws domain_error on shape
  // problems, constraint_error / decomposition_error on invalid points.
  static TrustParams make(Matrix omega, Matrix alpha, double nu);

  int d() const { return d_; }
  int q() const { return q_; }
  double nu() const { return nu_; }
  bool gaussian() const;

  const Matrix& omega() const { return omega_; }
  const Matrix& alpha() const { return alpha_; }
  const Matrix& delta() const { return delta_; }       // q x d
  const Matrix& sigma() const { return sigma_; }       // q x q
  const Vector& h() const { return h_; }
  bool h_ascending() const { return h_ascending_; }

  const Matrix& omega_chol() const { return omega_chol_; }
  const Matrix& omega_inv() const { return omega_inv_; }
  const Matrix& sigma_inv() const { return sigma_inv_; }
  const Matrix& cross() const { return cross_; }          // Delta' Sigma^{-1}, d x q
  const Matrix& cond_cov() const { return cond_cov_; }    // Omega - Delta' Sigma^{-1} Delta
  const Matrix& cond_chol() const { return cond_chol_; }
  const Matrix& sigma_chol() const { return sigma_chol_; }
  double log_det_omega() const { return log_det_omega_; }
  double log_det_cond() const { return log_det_cond_; }
  double log_det_sigma() const { return log_det_sigma_; }

  // Phi_q(0; Sigma) = T_q(0; Sigma, nu) (orthant probabilities at zero are
  // free of the degrees of freedom).
  double orthant_sigma() const { return orthant_sigma_; }

  double quad_omega(const Vector& z) const;  // z' Omega^{-1} z

 private:
  TrustParams() = default;
  int d_ = 0, q_ = 0;
  double nu_ = 0.0;
  Matrix omega_, alpha_, delta_, sigma_;
  Vector h_;
  bool h_ascending_ = true;
  Matrix omega_chol_, omega_inv_, sigma_chol_, sigma_inv_, cross_, cond_cov_, cond_chol_;
  double log_det_omega_ = 0.0, log_det_sigma_ = 0.0, log_det_cond_ = 0.0;
  double orthant_sigma_ = 1.0;
};

// Reorders latent columns so h is ascending (stable under ties); the joint
// density is invariant under this permutation.
TrustParams identify(const TrustParams& p);
std::pair<TrustParams, std::vector<int>> identify_with_order(const TrustParams& p);

}  // namespace trust
