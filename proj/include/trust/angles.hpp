#pragma once

#include <string>
#include <vector>

#include "trust/matrix.hpp"

namespace trust {

inline constexpr double kDefaultAngleEpsilon = 0.03;

// Hyper-spherical angles parameterizing a d x d correlation matrix through
// its Cholesky factor. Row i (2..d) carries angles psi_{i,1..i-1}; the angle
// adjacent to the diagonal, psi_{i,i-1}, ranges over (eps, 2*pi - eps), all
// earlier ones over (eps, pi - eps).
class AngleSet {
 public:
  AngleSet() : dim_(1) {}
  explicit AngleSet(int dim);
  AngleSet(int dim, std::vector<double> flat);

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(flat_.size()); }

  // 1-based row/col access, 2 <= i <= d, 1 <= j < i.
  double operator()(int i, int j) const { return flat_[index(i, j)]; }
  double& operator()(int i, int j) { return flat_[index(i, j)]; }

  double flat(int k) const { return flat_[k]; }
  double& flat(int k) { return flat_[k]; }
  const std::vector<double>& data() const { return flat_; }

  // Whether flat index k is the wide-range angle of its row (j == i-1).
  bool is_wide(int k) const;

  // Bounds of flat index k given the angle margin.
  std::pair<double, double> bounds(int k, double eps = kDefaultAngleEpsilon) const;

  bool within_bounds(double eps = kDefaultAngleEpsilon) const;

  // "psi_i_j" with 1-based indices, used in draw files.
  std::string name(int k) const;

  static int flat_count(int dim) { return dim * (dim - 1) / 2; }

 private:
  int index(int i, int j) const;
  int dim_;
  std::vector<double> flat_;
};

// Lower-triangular B with unit-norm rows; Omega = B * B^T is a correlation
// matrix. Throws domain_error when an angle is out of bounds.
Matrix angles_to_cholesky(const AngleSet& psi, double eps = kDefaultAngleEpsilon);

inline Matrix correlation_from_angles(const AngleSet& psi, double eps = kDefaultAngleEpsilon) {
  Matrix b = angles_to_cholesky(psi, eps);
  return b * b.transpose();
}

// Inverse map. Throws decomposition_error when omega is not PD, and
// constraint_error when a recovered angle violates its bounds.
AngleSet corr_to_angles(const Matrix& omega, double eps = kDefaultAngleEpsilon);

}  // namespace trust
