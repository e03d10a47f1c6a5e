#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "trust/errors.hpp"
#include "trust/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"TrUST distribution and copula toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  const std::vector<std::string> modes = {"simulate",  "fit-dist",   "fit-copula",
                                          "pseudo-obs", "dependence", "score",
                                          "density-grid"};
  for (const auto& m : modes) {
    CLI::App* sub = app.add_subcommand(m);
    sub->add_option("--config", config_path, "JSON configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "seed (overrides config)")->each([&](const std::string&) {
      seed_set = true;
    });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    trust::RunConfig cfg = trust::load_config(config_path);
    cfg.mode = app.get_subcommands().front()->get_name();
    cfg.echo["mode"] = cfg.mode;
    if (!out_dir.empty()) {
      cfg.out_dir = out_dir;
      cfg.echo["out_dir"] = out_dir;
    }
    if (seed_set) {
      cfg.seed = seed;
      cfg.echo["seed"] = seed;
    }
    trust::run_command(cfg);
    return 0;
  } catch (const trust::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const trust::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  }
}
