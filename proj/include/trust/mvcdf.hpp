#pragma once

#include "trust/matrix.hpp"
#include "trust/rng.hpp"

namespace trust {

struct CdfEstimate {
  double value = 0.0;
  double se = 0.0;  // standard error over the QMC randomizations
};

struct QmcOptions {
  int points = 1 << 14;
  int randomizations = 8;
};

inline constexpr int kMaxCdfDim = 12;

// P(X <= x) for X ~ N(0, sigma), Genz separation-of-variables with variable
// reordering and a randomly shifted Richtmyer rule. Dimension <= 12.
CdfEstimate mvn_cdf(const Vector& x, const Matrix& sigma, const QmcOptions& opts,
                    RngStream& rng);

// P(T <= x) for T ~ t_d(0, sigma, nu); nu = kInf falls back to the normal.
CdfEstimate mvt_cdf(const Vector& x, const Matrix& sigma, double nu,
                    const QmcOptions& opts, RngStream& rng);

}  // namespace trust
