#include "trust/sampling.hpp"

#include <cmath>

#include "trust/errors.hpp"
#include "trust/samplers.hpp"
#include "trust/student_t.hpp"

namespace trust {

SampleResult sample(const TrustParams& p, const std::optional<LocationScale>& loc,
                    int n, RngStream& rng, bool keep_latents) {
  if (n < 1) throw domain_error("sample: n must be positive");
  if (loc) {
    if (loc->mu.size() != p.d() || loc->s.size() != p.d())
      throw domain_error("sample: location/scale dimension mismatch");
    if ((loc->s.array() <= 0.0).any()) throw domain_error("sample: scales must be positive");
  }
  const int d = p.d(), q = p.q();
  if (q > 0 && p.orthant_sigma() < 1e-4)
    throw numeric_error("sample: orthant mass of Sigma too small for rejection sampling");

  SampleResult out;
  out.draws.resize(n, d);
  if (keep_latents) {
    out.l.resize(n, q);
    out.w.resize(n);
  }
  Vector eps(d), l(q);
  for (int i = 0; i < n; ++i) {
    const double w = p.gaussian() ? 1.0 : rng.gamma(0.5 * p.nu(), 0.5 * p.nu());
    const double root_w = std::sqrt(w);
    if (q > 0) l = sample_positive_orthant_mvn(p.sigma_chol(), rng) / root_w;
    for (int j = 0; j < d; ++j) eps(j) = rng.normal();
    Vector z = p.cond_chol().triangularView<Eigen::Lower>() * eps / root_w;
    if (q > 0) z += p.cross() * l;
    if (loc) z = loc->mu + z.cwiseProduct(loc->s);
    out.draws.row(i) = z.transpose();
    if (keep_latents) {
      if (q > 0) out.l.row(i) = l.transpose();
      out.w(i) = w;
    }
  }
  return out;
}

}  // namespace trust
