#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "trust/inference.hpp"
#include "trust/mvcdf.hpp"

namespace trust {

using Json = nlohmann::json;

struct GridSpec {
  int pair_i = 0, pair_j = 1;  // 0-based after parsing
  double lo = -6.0, hi = 6.0;
  int n = 101;
  bool u_space = false;
  Vector condition;  // values for the remaining coordinates (z-space, d > 2)
};

struct DependenceSpec {
  double kappa = 0.05;
  std::vector<double> kappa_grid = {0.01, 0.025, 0.05, 0.1, 0.15, 0.2,
                                    0.25, 0.3,  0.35, 0.4, 0.45, 0.5};
};

struct RunConfig {
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int q = 0;
  std::optional<double> fix_nu;

  std::string data_path;
  std::string held_out_path;
  std::string summary_path;
  std::string baseline_summary_path;

  std::optional<Theta> params;  // explicit parameter point
  int n_draws = 0;
  bool write_latents = false;

  McmcConfig mcmc;
  PriorConfig prior;
  QmcOptions qmc;
  DependenceSpec dependence;
  GridSpec grid;

  Json echo;  // the fully-defaulted document this run executes
};

// Parses either a full config document or a summary document carrying the
// original config under "config". Throws validation_error on problems.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);

// Executes one command; writes outputs under cfg.out_dir. Nothing is
// written until the command has fully succeeded.
void run_command(const RunConfig& cfg);

// Serialization helpers shared with the tests.
Json theta_to_json(const Theta& th);
Theta theta_from_json(const Json& j);
Json summary_for_fit(const RunConfig& cfg, const PosteriorDraws& draws, const Matrix& data,
                     double wall_seconds);

}  // namespace trust
