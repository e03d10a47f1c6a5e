#pragma once

#include <vector>

#include "trust/params.hpp"

namespace trust {

// log f_TrUST(z; Omega, A, nu). nu = kInf gives the TrUSN (Gaussian) case.
double log_pdf_joint(const Vector& z, const TrustParams& p);

// log of the univariate marginal of coordinate j (0-based), evaluated
// exactly through the q-variate conditional CDF.
double log_pdf_marginal(double zj, int j, const TrustParams& p);

// Extended density with hidden truncation at L + tau > 0; tau = 0 reduces to
// log_pdf_joint.
double log_pdf_extended(const Vector& z, const TrustParams& p, const Vector& tau);

// Conditional density of z1 given z2 under the index partition (0-based).
double log_pdf_conditional(const Vector& z1, const Vector& z2,
                           const std::vector<int>& idx1, const std::vector<int>& idx2,
                           const TrustParams& p);

// Location-scale version: y = mu + S z, S = diag(s).
double log_pdf_location_scale(const Vector& y, const Vector& mu, const Vector& s,
                              const TrustParams& p);

// log t_d(x; v, df) for a general scale matrix; df = kInf gives the normal.
double log_mvt_pdf(const Vector& x, const Matrix& v, double df);

}  // namespace trust
