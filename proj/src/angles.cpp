#include "trust/angles.hpp"

#include <algorithm>
#include <cmath>

#include "trust/errors.hpp"

namespace trust {

AngleSet::AngleSet(int dim) : dim_(dim), flat_(flat_count(dim), M_PI_2) {
  if (dim < 1) throw domain_error("AngleSet: dimension must be >= 1");
}

AngleSet::AngleSet(int dim, std::vector<double> flat) : dim_(dim), flat_(std::move(flat)) {
  if (dim < 1) throw domain_error("AngleSet: dimension must be >= 1");
  if (static_cast<int>(flat_.size()) != flat_count(dim))
    throw domain_error("AngleSet: expected d(d-1)/2 angles");
}

int AngleSet::index(int i, int j) const {
  // Rows i = 2..d laid out consecutively: (2,1), (3,1), (3,2), (4,1), ...
  return (i - 2) * (i - 1) / 2 + (j - 1);
}

bool AngleSet::is_wide(int k) const {
  int i = 2;
  while (index(i + 1, 1) <= k) ++i;
  int j = k - index(i, 1) + 1;
  return j == i - 1;
}

std::pair<double, double> AngleSet::bounds(int k, double eps) const {
  return is_wide(k) ? std::pair{eps, 2.0 * M_PI - eps} : std::pair{eps, M_PI - eps};
}

bool AngleSet::within_bounds(double eps) const {
  for (int k = 0; k < count(); ++k) {
    auto [lo, hi] = bounds(k, eps);
    if (!(flat_[k] > lo && flat_[k] < hi)) return false;
  }
  return true;
}

std::string AngleSet::name(int k) const {
  int i = 2;
  while (index(i + 1, 1) <= k) ++i;
  int j = k - index(i, 1) + 1;
  return "psi_" + std::to_string(i) + "_" + std::to_string(j);
}

Matrix angles_to_cholesky(const AngleSet& psi, double eps) {
  const int d = psi.dim();
  for (int k = 0; k < psi.count(); ++k) {
    auto [lo, hi] = psi.bounds(k, eps);
    if (!(psi.flat(k) > lo && psi.flat(k) < hi))
      throw domain_error("angles_to_cholesky: angle " + psi.name(k) + " out of bounds");
  }
  Matrix b = Matrix::Zero(d, d);
  b(0, 0) = 1.0;
  for (int i = 2; i <= d; ++i) {
    double sin_prod = 1.0;
    for (int j = 1; j <= i - 1; ++j) {
      b(i - 1, j - 1) = std::cos(psi(i, j)) * sin_prod;
      sin_prod *= std::sin(psi(i, j));
    }
    b(i - 1, i - 1) = sin_prod;
  }
  return b;
}

AngleSet corr_to_angles(const Matrix& omega, double eps) {
  const int d = static_cast<int>(omega.rows());
  if (omega.cols() != d) throw domain_error("corr_to_angles: matrix must be square");
  if (!omega.diagonal().isApproxToConstant(1.0, 1e-8))
    throw domain_error("corr_to_angles: diagonal must be one");
  Matrix l = cholesky_or_throw(omega, "corr_to_angles");

  AngleSet psi(d);
  for (int i = 2; i <= d; ++i) {
    double sin_prod = 1.0;
    for (int j = 1; j <= i - 1; ++j) {
      double c = l(i - 1, j - 1) / sin_prod;
      c = std::clamp(c, -1.0, 1.0);
      double angle;
      if (j == i - 1) {
        // Wide-range angle: recover from (cos, sin) with sin given by the
        // (positive) Cholesky diagonal, which lands in (0, pi).
        double s = l(i - 1, i - 1) / sin_prod;
        angle = std::atan2(std::max(s, 0.0), c);
      } else {
        angle = std::acos(c);
      }
      psi(i, j) = angle;
      sin_prod *= std::sin(angle);
      if (sin_prod <= 0.0)
        throw constraint_error("corr_to_angles: degenerate angle chain at " + psi.name(0));
    }
  }
  for (int k = 0; k < psi.count(); ++k) {
    auto [lo, hi] = psi.bounds(k, eps);
    if (!(psi.flat(k) > lo && psi.flat(k) < hi))
      throw constraint_error("corr_to_angles: recovered angle " + psi.name(k) +
                             " outside (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  return psi;
}

}  // namespace trust
