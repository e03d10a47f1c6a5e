#pragma once

#include "trust/matrix.hpp"
#include "trust/rng.hpp"

namespace trust {

double sample_gamma(double shape, double rate, RngStream& rng);

// Draw from N(mean, variance) conditioned on the result being positive.
// Inverse-CDF when the truncation mass is non-negligible, exponential
// rejection in the deep tail.
double sample_trunc_normal_lower(double mean, double variance, RngStream& rng);

// Draw from N(0, sigma) conditioned on every coordinate being positive, by
// rejection from the untruncated Gaussian. Exact; throws numeric_error when
// the orthant mass makes rejection impractical.
Vector sample_positive_orthant_mvn(const Matrix& sigma_chol, RngStream& rng,
                                   int max_tries = 200000);

}  // namespace trust
