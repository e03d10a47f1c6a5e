#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "trust/matrix.hpp"

namespace trust::test {

// Asymptotic Kolmogorov-Smirnov p-value for n samples against a continuous
// CDF oracle.
inline double ks_p_value(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
  return std::clamp(p, 0.0, 1.0);
}

// KS p-value where the oracle CDF itself comes from cumulative quadrature of
// a density: integrates segment by segment across the sorted sample.
inline double ks_p_value_quadrature(std::vector<double> x,
                                    const std::function<double(double)>& pdf,
                                    double lower_support) {
  static const double gx[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                               0.76923465505284155, 0.95308992296933200};
  static const double gw[5] = {0.11846344252809454, 0.23931433524968324,
                               0.28444444444444444, 0.23931433524968324,
                               0.11846344252809454};
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0, acc = 0.0, prev = lower_support;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = x[i] - prev;
    double seg = 0.0;
    for (int k = 0; k < 5; ++k) seg += gw[k] * pdf(prev + gx[k] * h);
    acc += seg * h;
    prev = x[i];
    d = std::max(d, std::abs(acc - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - acc));
  }
  const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
  return std::clamp(p, 0.0, 1.0);
}

// Adaptive Simpson quadrature used as an independent oracle.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int depth = 24) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double acc,
          int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
    const double fl = f(lmid), fr = f(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    if (d <= 0 || std::abs(left + right - acc) < 15.0 * tol) return left + right;
    return rec(lo, mid, flo, fl, fmid, left, d - 1) +
           rec(mid, hi, fmid, fr, fhi, right, d - 1);
  };
  const double mid = 0.5 * (a + b);
  const double fa = f(a), fm = f(mid), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, depth);
}

// Tensor Gauss-Legendre (5-point composite) over [alo,ahi] x [blo,bhi].
inline double integrate_2d(const std::function<double(double, double)>& f, double alo,
                           double ahi, double blo, double bhi, int cells) {
  static const double gx[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                               0.76923465505284155, 0.95308992296933200};
  static const double gw[5] = {0.11846344252809454, 0.23931433524968324,
                               0.28444444444444444, 0.23931433524968324,
                               0.11846344252809454};
  const double ha = (ahi - alo) / cells, hb = (bhi - blo) / cells;
  double total = 0.0;
  for (int ca = 0; ca < cells; ++ca) {
    for (int cb = 0; cb < cells; ++cb) {
      for (int ia = 0; ia < 5; ++ia) {
        const double x = alo + (ca + gx[ia]) * ha;
        for (int ib = 0; ib < 5; ++ib) {
          const double y = blo + (cb + gx[ib]) * hb;
          total += gw[ia] * gw[ib] * ha * hb * f(x, y);
        }
      }
    }
  }
  return total;
}

// DGP parameter values used across the test suites.
inline Matrix dgp_omega() {
  Matrix om(3, 3);
  om << 1.0, 0.5, 0.3, 0.5, 1.0, 0.811, 0.3, 0.811, 1.0;
  return om;
}

inline Matrix dgp1_alpha() {
  Matrix a(3, 1);
  a << -5.0, 3.0, 5.0;
  return a;
}

inline Matrix dgp2_alpha() {
  Matrix a(3, 2);
  a << 5.0, -10.0, 3.0, 0.0, 5.0, 5.0;
  return a;
}

// Figure-1 style bivariate parameter set: omega in {-0.5, 0, 0.5} (row),
// alpha2 in {(5,5), (0,5), (-5,5)} (column), alpha1 = (5,5), nu = 5.
inline std::pair<Matrix, Matrix> fig1_set(int row, int col) {
  const double omegas[3] = {-0.5, 0.0, 0.5};
  const double a2_first[3] = {5.0, 0.0, -5.0};
  Matrix om(2, 2);
  om << 1.0, omegas[row], omegas[row], 1.0;
  Matrix a(2, 2);
  a << 5.0, a2_first[col], 5.0, 5.0;
  return {om, a};
}

}  // namespace trust::test
