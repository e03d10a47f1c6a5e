#pragma once

#include <optional>

#include "trust/params.hpp"
#include "trust/rng.hpp"

namespace trust {

struct LocationScale {
  Vector mu;
  Vector s;  // strictly positive
};

struct SampleResult {
  Matrix draws;   // n x d
  Matrix l;       // n x q, strictly positive (empty unless requested)
  Vector w;       // n, strictly positive (empty unless requested)
};

// Exact draws via the three-step generative representation: W ~ Gamma(nu/2,
// nu/2), L | W a positive-orthant Gaussian, Z | L, W Gaussian. nu = kInf
// fixes W = 1.
SampleResult sample(const TrustParams& p, const std::optional<LocationScale>& loc,
                    int n, RngStream& rng, bool keep_latents = false);

}  // namespace trust
