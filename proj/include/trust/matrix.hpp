#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "trust/errors.hpp"

namespace trust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Lower Cholesky factor, or decomposition_error when not PD.
inline Matrix cholesky_or_throw(const Matrix& s, const char* what) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success)
    throw decomposition_error(std::string(what) + ": matrix not positive definite");
  return llt.matrixL();
}

inline bool is_positive_definite(const Matrix& s) {
  return Eigen::LLT<Matrix>(s).info() == Eigen::Success;
}

// D^{-1/2} S D^{-1/2} with D = diag(S).
inline Matrix to_correlation(const Matrix& s) {
  Vector d = s.diagonal().cwiseSqrt();
  return d.cwiseInverse().asDiagonal() * s * d.cwiseInverse().asDiagonal();
}

inline double log_det_from_cholesky(const Matrix& l) {
  return 2.0 * l.diagonal().array().log().sum();
}

}  // namespace trust
