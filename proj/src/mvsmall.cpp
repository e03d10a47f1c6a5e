#include "trust/mvsmall.hpp"

#include <array>
#include <cmath>

#include "trust/errors.hpp"
#include "trust/student_t.hpp"

namespace trust {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], positive half.
constexpr std::array<double, 3> kW6 = {0.1713244923791704, 0.3607615730481386,
                                       0.4679139345726910};
constexpr std::array<double, 3> kX6 = {0.9324695142031521, 0.6612093864662645,
                                       0.2386191860831969};
constexpr std::array<double, 6> kW12 = {0.04717533638651183, 0.1069393259953184,
                                        0.1600783285433462,  0.2031674267230659,
                                        0.2334925365383548,  0.2491470458134028};
constexpr std::array<double, 6> kX12 = {0.9815606342467192, 0.9041172563704749,
                                        0.7699026741943047, 0.5873179542866175,
                                        0.3678314989981802, 0.1252334085114689};
constexpr std::array<double, 10> kW20 = {
    0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
    0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
    0.1316886384491766,  0.1420961093183820,  0.1491729864726037,
    0.1527533871307258};
constexpr std::array<double, 10> kX20 = {
    0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
    0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
    0.5108670019508271, 0.3737060887154195, 0.2277858511416451,
    0.07652652113349734};

constexpr std::array<double, 8> kW16 = {
    0.02715245941175409, 0.06225352393864789, 0.09515851168249278,
    0.1246289712555339,  0.1495959888165767,  0.1691565193950025,
    0.1826034150449236,  0.1894506104550685};
constexpr std::array<double, 8> kX16 = {
    0.9894009349916499, 0.9445750230732326, 0.8656312023878318,
    0.7554044083550030, 0.6178762444026438, 0.4580167776572274,
    0.2816035507792589, 0.09501250983763744};

// P(X > h, Y > k) for standard bivariate normal, correlation r.
// Genz (2004) hybrid of Drezner-Wesolowsky and a tail expansion.
double bvn_upper(double h, double k, double r) {
  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = std::asin(r);
    auto accumulate = [&](const auto& w, const auto& x) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        for (int pm : {-1, 1}) {
          double sn = std::sin(0.5 * asr * (1.0 + pm * x[i]));
          bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
      }
    };
    if (std::abs(r) < 0.3)
      accumulate(kW6, kX6);
    else if (std::abs(r) < 0.75)
      accumulate(kW12, kX12);
    else
      accumulate(kW20, kX20);
    bvn = bvn * asr / (4.0 * M_PI) + normal_cdf(-h) * normal_cdf(-k);
    return bvn;
  }
  // |r| >= 0.925: expansion around r = +-1.
  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr2 = -0.5 * (bs / as + hk);
    if (asr2 > -100.0)
      bvn = a * std::exp(asr2) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (-hk < 100.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-0.5 * hk) * std::sqrt(2.0 * M_PI) * normal_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a *= 0.5;
    for (std::size_t i = 0; i < kW20.size(); ++i) {
      for (int pm : {-1, 1}) {
        const double xs = a * (1.0 + pm * kX20[i]) * a * (1.0 + pm * kX20[i]);
        const double rs = std::sqrt(1.0 - xs);
        asr2 = -0.5 * (bs / xs + hk);
        if (asr2 > -100.0) {
          bvn += a * kW20[i] * std::exp(asr2) *
                 (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                  (1.0 + c * xs * (1.0 + d * xs)));
        }
      }
    }
    bvn = -bvn / (2.0 * M_PI);
  }
  if (r > 0.0) return bvn + normal_cdf(-std::max(h, k));
  bvn = -bvn;
  if (k > h) bvn += normal_cdf(k) - normal_cdf(h);
  return bvn;
}

}  // namespace

double bvn_cdf(double b1, double b2, double rho) {
  if (!(rho > -1.0 && rho < 1.0)) {
    if (rho >= 1.0) return normal_cdf(std::min(b1, b2));
    if (rho <= -1.0) return std::max(0.0, normal_cdf(b1) + normal_cdf(b2) - 1.0);
  }
  if (!std::isfinite(b1) || !std::isfinite(b2)) {
    if (b1 == -kInf || b2 == -kInf) return 0.0;
    if (b1 == kInf) return normal_cdf(b2);
    if (b2 == kInf) return normal_cdf(b1);
  }
  double p = bvn_upper(-b1, -b2, rho);
  return std::min(1.0, std::max(0.0, p));
}

namespace {

double phi2_density(double x, double y, double rho) {
  const double omr = 1.0 - rho * rho;
  if (omr <= 0.0) return 0.0;
  return std::exp(-0.5 * (x * x - 2.0 * rho * x * y + y * y) / omr) /
         (2.0 * M_PI * std::sqrt(omr));
}

}  // namespace

double tvn_cdf(const Vector& b, const Matrix& r) {
  for (int i = 0; i < 3; ++i) {
    if (b(i) == -kInf) return 0.0;
    if (b(i) == kInf) {
      int a = (i + 1) % 3, c = (i + 2) % 3;
      return bvn_cdf(b(a), b(c), r(a, c));
    }
  }
  // Fix the strongest pair correlation and scale the other two from zero;
  // Plackett's identity turns the difference into a line integral with a
  // smooth bounded integrand (Genz's trivariate scheme).
  int k = 2;  // variable left out of the fixed pair
  if (std::abs(r(0, 1)) < std::abs(r(0, 2))) k = 1;
  double m01 = std::max(std::abs(r(0, 1)), std::abs(r(0, 2)));
  if (std::abs(r(1, 2)) > m01) k = 0;
  const int i = (k + 1) % 3, j = (k + 2) % 3;
  const double b1 = b(i), b2 = b(j), b3 = b(k);
  const double r12 = r(i, j), rho31 = r(i, k), rho32 = r(j, k);

  double acc = bvn_cdf(b1, b2, r12) * normal_cdf(b3);
  if (rho31 == 0.0 && rho32 == 0.0) return std::clamp(acc, 0.0, 1.0);

  static constexpr std::array<double, 4> panels = {0.0, 0.4, 0.75, 1.0};
  double integral = 0.0;
  for (std::size_t p = 0; p + 1 < panels.size(); ++p) {
    const double half = 0.5 * (panels[p + 1] - panels[p]);
    const double mid = 0.5 * (panels[p + 1] + panels[p]);
    for (std::size_t g = 0; g < kW16.size(); ++g) {
      for (int pm : {-1, 1}) {
        const double t = mid + pm * half * kX16[g];
        const double r13 = t * rho31, r23 = t * rho32;
        const double det = 1.0 - r12 * r12 - r13 * r13 - r23 * r23 +
                           2.0 * r12 * r13 * r23;
        double term = 0.0;
        if (rho31 != 0.0) {
          const double om = 1.0 - r13 * r13;
          const double m2 = ((r12 - r13 * r23) * b1 + (r23 - r12 * r13) * b3) / om;
          const double s2 = std::sqrt(std::max(det / om, 1e-28));
          term += rho31 * phi2_density(b1, b3, r13) * normal_cdf((b2 - m2) / s2);
        }
        if (rho32 != 0.0) {
          const double om = 1.0 - r23 * r23;
          const double m1 = ((r12 - r23 * r13) * b2 + (r13 - r12 * r23) * b3) / om;
          const double s1 = std::sqrt(std::max(det / om, 1e-28));
          term += rho32 * phi2_density(b2, b3, r23) * normal_cdf((b1 - m1) / s1);
        }
        integral += kW16[g] * half * term;
      }
    }
  }
  return std::clamp(acc + integral, 0.0, 1.0);
}

double orthant_zero(const Matrix& s) {
  const int d = static_cast<int>(s.rows());
  if (d == 0) return 1.0;
  Matrix r = to_correlation(s);
  switch (d) {
    case 1:
      return 0.5;
    case 2:
      return 0.25 + std::asin(std::clamp(r(0, 1), -1.0, 1.0)) / (2.0 * M_PI);
    case 3:
      return 0.125 + (std::asin(std::clamp(r(0, 1), -1.0, 1.0)) +
                      std::asin(std::clamp(r(0, 2), -1.0, 1.0)) +
                      std::asin(std::clamp(r(1, 2), -1.0, 1.0))) /
                         (4.0 * M_PI);
    default:
      throw domain_error("orthant_zero: closed form limited to dimension <= 3");
  }
}

SmallTCdf::SmallTCdf(double df, int nodes_per_panel) : df_(df) {
  if (!(df > 0.0)) throw domain_error("SmallTCdf: df must be positive");
  if (nodes_per_panel != 16) throw domain_error("SmallTCdf: only 16 nodes per panel");
  if (df == kInf) {
    s_ = {1.0};
    w_ = {1.0};
    return;
  }
  // Integrate in the scale variable s = sqrt(chi2/df) against its density;
  // panel breaks at chi quantiles keep the rule sharp for any df.
  static constexpr std::array<double, 9> probs = {0.0,  0.02, 0.1, 0.3, 0.5,
                                                  0.7, 0.9,  0.98, 1.0 - 1e-12};
  const double half_df = 0.5 * df;
  const double log_norm = std::log(2.0) + half_df * std::log(half_df) - std::lgamma(half_df);
  std::array<double, 9> breaks;
  breaks[0] = 0.0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    breaks[i] = std::sqrt(chi2_scale_quantile(probs[i], df));
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
    for (std::size_t i = 0; i < kW16.size(); ++i) {
      for (int pm : {-1, 1}) {
        const double s = mid + pm * half * kX16[i];
        const double log_pdf = log_norm + (df - 1.0) * std::log(s) - half_df * s * s;
        s_.push_back(s);
        w_.push_back(kW16[i] * half * std::exp(log_pdf));
      }
    }
  }
}

double SmallTCdf::cdf2(double x1, double x2, double rho) const {
  double acc = 0.0;
  for (std::size_t m = 0; m < s_.size(); ++m)
    acc += w_[m] * bvn_cdf(s_[m] * x1, s_[m] * x2, rho);
  return acc;
}

double SmallTCdf::cdf(const Vector& x, const Matrix& scale) const {
  const int d = static_cast<int>(x.size());
  if (d == 0) return 1.0;
  Vector sd = scale.diagonal().cwiseSqrt();
  Vector b = x.cwiseQuotient(sd);
  if (d == 1) {
    if (df_ == kInf) return normal_cdf(b(0));
    return t_cdf(b(0), df_);
  }
  Matrix r = to_correlation(scale);
  if (d == 2) return cdf2(b(0), b(1), r(0, 1));
  if (d == 3) {
    double acc = 0.0;
    for (std::size_t m = 0; m < s_.size(); ++m) acc += w_[m] * tvn_cdf(s_[m] * b, r);
    return acc;
  }
  throw domain_error("SmallTCdf: dimension <= 3 only");
}

}  // namespace trust
