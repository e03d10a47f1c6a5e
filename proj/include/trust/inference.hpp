#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trust/marginal_table.hpp"
#include "trust/params.hpp"
#include "trust/rng.hpp"

namespace trust {

struct PriorConfig {
  double epsilon = kDefaultAngleEpsilon;  // angle bound
  double alpha_variance = 25.0;           // N(0, 25) on each alpha entry
  double nu_shift = 2.0;                  // (nu - 2) ~ Gamma(shape, rate)
  double nu_shape = 3.0;
  double nu_rate = 0.2;
  bool reference_loc_scale = true;        // p(mu, s) propto prod 1/s_j
};

struct McmcConfig {
  int n_burn = 10000;
  int n_keep = 10000;
  int thin = 1;
  double target_acceptance = 0.44;
  int adapt_window = 50;
  int grid_knots = 512;   // copula quantile tables
  int cheb_points = 65;
};

// Sampled parameter block. mu and s are empty in copula mode; nu may be
// fixed (possibly at kInf, the Gaussian branch).
struct Theta {
  AngleSet psi;
  Matrix alpha;  // d x q
  double nu = 10.0;
  Vector mu;
  Vector s;
  bool fix_nu = false;

  int d() const { return psi.dim(); }
  int q() const { return static_cast<int>(alpha.cols()); }
  bool has_loc_scale() const { return mu.size() > 0; }
};

TrustParams build_params(const Theta& th, double eps = kDefaultAngleEpsilon);

struct LatentState {
  Matrix l;  // n x q, strictly positive
  Vector w;  // n, strictly positive
};

// Extended log-likelihood of the (Z, L, W) augmentation for observed rows y.
double log_extended_likelihood(const Theta& th, const LatentState& lat, const Matrix& y);

// As above with precomputed params and standardized data z = S^{-1}(y - mu);
// log_det_s_sum = sum_j log s_j (0 in copula mode).
double log_extended_likelihood_z(const TrustParams& p, const LatentState& lat,
                                 const Matrix& z, double log_det_s_sum, bool gaussian_w);

// Log prior density; -inf encodes any support or ordering violation.
double log_prior(const Theta& th, const PriorConfig& cfg);

// Algorithm step 1: latent truncated Gaussians, independent across (i,k).
Matrix step1_sample_l(const TrustParams& p, const Vector& w, const Matrix& z, RngStream& rng);

// Algorithm step 2: latent Gamma mixing weights.
Vector step2_sample_w(const TrustParams& p, const Matrix& l, const Matrix& z, double nu,
                      RngStream& rng);

struct PosteriorDraws {
  std::vector<Theta> draws;            // identified points
  std::vector<double> log_lik;         // conventional log-likelihood per draw
  std::vector<double> ext_log_post;    // extended log posterior per draw
  std::vector<std::string> component_names;
  std::vector<double> acceptance_rates;
  int d = 0;
  int q = 0;
  bool copula = false;
  McmcConfig cfg;
  PriorConfig prior;
};

// Data-augmentation MCMC for the location-scale TrUST distribution.
PosteriorDraws run_mcmc(const Matrix& y, int q, const McmcConfig& cfg,
                        const PriorConfig& prior, RngStream& rng,
                        std::optional<double> fix_nu = std::nullopt);

// Copula-parameter MCMC on pseudo observations in (0,1)^d.
PosteriorDraws fit_copula_mcmc(const Matrix& u, int q, const McmcConfig& cfg,
                               const PriorConfig& prior, RngStream& rng,
                               std::optional<double> fix_nu = std::nullopt);

struct DicResult {
  double dic = 0.0;
  double mean_log_lik = 0.0;
  double log_lik_at_mean = 0.0;
  bool plug_in_fallback = false;  // posterior mean invalid, best draw used
};

// DIC = -4 E[log p(y|theta)] + 2 log p(y|theta_hat). For copula draws pass
// the pseudo observations as y.
DicResult dic(const PosteriorDraws& draws, const Matrix& y);

// Element-wise posterior mean on the transformed scale, mapped back and
// identified; throws constraint_error when the point is invalid.
Theta posterior_mean_theta(const PosteriorDraws& draws);

double log_lik_at(const Theta& th, const Matrix& y, bool copula, const McmcConfig& cfg);

}  // namespace trust
