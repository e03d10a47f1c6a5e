#include "trust/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "trust/copula.hpp"
#include "trust/student_t.hpp"
#include "trust/csv.hpp"
#include "trust/density.hpp"
#include "trust/errors.hpp"
#include "trust/sampling.hpp"

namespace trust {

namespace {

constexpr const char* kVersion = "0.1.0";

const std::vector<std::string> kModes = {"simulate",  "fit-dist",     "fit-copula",
                                         "pseudo-obs", "dependence",  "score",
                                         "density-grid"};

double nu_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw validation_error("nu: expected a number or \"inf\"");
  }
  if (!j.is_number()) throw validation_error("nu: expected a number or \"inf\"");
  return j.get<double>();
}

Json nu_to_json(double nu) {
  if (nu == kInf) return Json("inf");
  return Json(nu);
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw validation_error(std::string(what) + ": expected a matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw validation_error(std::string(what) + ": ragged matrix");
    for (int k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw validation_error(std::string(what) + ": expected an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
  return v;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json theta_to_json(const Theta& th) {
  Json j;
  j["psi"] = th.psi.data();
  Json alpha = Json::array();
  for (int r = 0; r < th.d(); ++r) {
    Json row = Json::array();
    for (int k = 0; k < th.q(); ++k) row.push_back(th.alpha(r, k));
    alpha.push_back(row);
  }
  j["alpha"] = alpha;
  j["nu"] = nu_to_json(th.nu);
  if (th.mu.size()) {
    j["mu"] = std::vector<double>(th.mu.begin(), th.mu.end());
    j["s"] = std::vector<double>(th.s.begin(), th.s.end());
  }
  j["fix_nu"] = th.fix_nu;
  return j;
}

Theta theta_from_json(const Json& j) {
  Theta th;
  if (j.contains("psi")) {
    auto flat = j["psi"].get<std::vector<double>>();
    int d = 1;
    while (AngleSet::flat_count(d) < static_cast<int>(flat.size())) ++d;
    if (AngleSet::flat_count(d) != static_cast<int>(flat.size()))
      throw validation_error("params.psi: length must be d(d-1)/2");
    th.psi = AngleSet(d, flat);
  } else if (j.contains("omega")) {
    Matrix omega = matrix_from_json(j["omega"], "params.omega");
    th.psi = corr_to_angles(omega);
  } else {
    throw validation_error("params: need either \"psi\" or \"omega\"");
  }
  const int d = th.psi.dim();
  if (j.contains("alpha") && !j["alpha"].empty()) {
    Matrix a = matrix_from_json(j["alpha"], "params.alpha");
    if (a.rows() != d) throw validation_error("params.alpha: must have d rows");
    th.alpha = a;
  } else {
    th.alpha = Matrix(d, 0);
  }
  if (!j.contains("nu")) throw validation_error("params: missing nu");
  th.nu = nu_from_json(j["nu"]);
  if (j.contains("mu")) {
    th.mu = vector_from_json(j["mu"], "params.mu");
    if (!j.contains("s")) throw validation_error("params: mu given without s");
    th.s = vector_from_json(j["s"], "params.s");
    if (th.mu.size() != d || th.s.size() != d)
      throw validation_error("params: mu/s must have d entries");
    if ((th.s.array() <= 0.0).any()) throw validation_error("params: s must be positive");
  }
  th.fix_nu = j.value("fix_nu", false);
  return th;
}

RunConfig parse_config(const Json& doc_in) {
  Json doc = doc_in;
  if (!doc.contains("mode") && doc.contains("config")) doc = doc.at("config");
  RunConfig cfg;
  if (!doc.contains("mode")) throw validation_error("config: missing \"mode\"");
  cfg.mode = doc["mode"].get<std::string>();
  if (std::find(kModes.begin(), kModes.end(), cfg.mode) == kModes.end())
    throw validation_error("config: unknown mode '" + cfg.mode + "'");

  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  cfg.out_dir = doc.value("out_dir", std::string("."));
  cfg.q = doc.value("q", 0);
  if (cfg.q < 0 || cfg.q > 3) throw validation_error("config: q must be in {0,1,2,3}");
  if (doc.contains("fix_nu")) cfg.fix_nu = nu_from_json(doc["fix_nu"]);

  cfg.data_path = doc.value("data", std::string());
  cfg.held_out_path = doc.value("held_out", std::string());
  cfg.summary_path = doc.value("summary", std::string());
  cfg.baseline_summary_path = doc.value("baseline_summary", std::string());
  cfg.n_draws = doc.value("n", 0);
  cfg.write_latents = doc.value("write_latents", false);

  if (doc.contains("params")) cfg.params = theta_from_json(doc["params"]);

  if (doc.contains("mcmc")) {
    const Json& m = doc["mcmc"];
    cfg.mcmc.n_burn = m.value("n_burn", cfg.mcmc.n_burn);
    cfg.mcmc.n_keep = m.value("n_keep", cfg.mcmc.n_keep);
    cfg.mcmc.thin = m.value("thin", cfg.mcmc.thin);
    cfg.mcmc.target_acceptance = m.value("target_acceptance", cfg.mcmc.target_acceptance);
    cfg.mcmc.adapt_window = m.value("adapt_window", cfg.mcmc.adapt_window);
    cfg.mcmc.grid_knots = m.value("grid_knots", cfg.mcmc.grid_knots);
    cfg.mcmc.cheb_points = m.value("cheb_points", cfg.mcmc.cheb_points);
    if (cfg.mcmc.n_burn <= 0 || cfg.mcmc.n_keep <= 0 || cfg.mcmc.thin < 1)
      throw validation_error("config: n_burn, n_keep must be positive and thin >= 1");
  }
  if (doc.contains("prior")) {
    const Json& p = doc["prior"];
    cfg.prior.epsilon = p.value("epsilon", cfg.prior.epsilon);
    cfg.prior.alpha_variance = p.value("alpha_variance", cfg.prior.alpha_variance);
    cfg.prior.nu_shift = p.value("nu_shift", cfg.prior.nu_shift);
    cfg.prior.nu_shape = p.value("nu_shape", cfg.prior.nu_shape);
    cfg.prior.nu_rate = p.value("nu_rate", cfg.prior.nu_rate);
    cfg.prior.reference_loc_scale = p.value("reference_loc_scale", cfg.prior.reference_loc_scale);
    if (!(cfg.prior.epsilon > 0.0) || !(cfg.prior.alpha_variance > 0.0) ||
        !(cfg.prior.nu_shape > 0.0) || !(cfg.prior.nu_rate > 0.0))
      throw validation_error("config: prior hyperparameters must be positive");
  }
  if (doc.contains("qmc")) {
    cfg.qmc.points = doc["qmc"].value("points", cfg.qmc.points);
    cfg.qmc.randomizations = doc["qmc"].value("randomizations", cfg.qmc.randomizations);
  }
  if (doc.contains("dependence")) {
    const Json& dj = doc["dependence"];
    cfg.dependence.kappa = dj.value("kappa", cfg.dependence.kappa);
    if (dj.contains("kappa_grid"))
      cfg.dependence.kappa_grid = dj["kappa_grid"].get<std::vector<double>>();
    for (double k : cfg.dependence.kappa_grid)
      if (!(k > 0.0 && k <= 0.5)) throw validation_error("config: kappa values must lie in (0,0.5]");
  }
  if (doc.contains("grid")) {
    const Json& g = doc["grid"];
    if (g.contains("pair")) {
      auto pr = g["pair"].get<std::vector<int>>();
      if (pr.size() != 2) throw validation_error("grid.pair: expected two 1-based indices");
      cfg.grid.pair_i = pr[0] - 1;
      cfg.grid.pair_j = pr[1] - 1;
    }
    cfg.grid.lo = g.value("lo", cfg.grid.lo);
    cfg.grid.hi = g.value("hi", cfg.grid.hi);
    cfg.grid.n = g.value("n", cfg.grid.n);
    cfg.grid.u_space = g.value("space", std::string("z")) == "u";
    if (g.contains("condition")) cfg.grid.condition = vector_from_json(g["condition"], "grid.condition");
    if (cfg.grid.n < 2 || !(cfg.grid.hi > cfg.grid.lo))
      throw validation_error("grid: need n >= 2 and hi > lo");
  }

  // materialize the document this run executes
  Json echo = doc;
  echo["out_dir"] = cfg.out_dir;
  echo["q"] = cfg.q;
  echo["mcmc"] = {{"n_burn", cfg.mcmc.n_burn},
                  {"n_keep", cfg.mcmc.n_keep},
                  {"thin", cfg.mcmc.thin},
                  {"target_acceptance", cfg.mcmc.target_acceptance},
                  {"adapt_window", cfg.mcmc.adapt_window},
                  {"grid_knots", cfg.mcmc.grid_knots},
                  {"cheb_points", cfg.mcmc.cheb_points}};
  echo["prior"] = {{"epsilon", cfg.prior.epsilon},
                   {"alpha_variance", cfg.prior.alpha_variance},
                   {"nu_shift", cfg.prior.nu_shift},
                   {"nu_shape", cfg.prior.nu_shape},
                   {"nu_rate", cfg.prior.nu_rate},
                   {"reference_loc_scale", cfg.prior.reference_loc_scale}};
  echo["qmc"] = {{"points", cfg.qmc.points}, {"randomizations", cfg.qmc.randomizations}};
  if (cfg.seed) echo["seed"] = *cfg.seed;
  cfg.echo = echo;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw validation_error("config parse failure: " + std::string(e.what()));
  }
  return parse_config(doc);
}

namespace {

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw validation_error("config: mode '" + cfg.mode + "' requires a seed");
  return *cfg.seed;
}

Theta point_for(const RunConfig& cfg) {
  if (cfg.params) return *cfg.params;
  if (cfg.summary_path.empty())
    throw validation_error("config: mode '" + cfg.mode +
                           "' needs either explicit params or a summary file");
  std::ifstream in(cfg.summary_path);
  if (!in) throw validation_error("cannot open summary '" + cfg.summary_path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw validation_error("summary parse failure: " + std::string(e.what()));
  }
  if (!doc.contains("point")) throw validation_error("summary: missing \"point\"");
  return theta_from_json(doc["point"]);
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write '" + path + "'");
  out << body;
  if (!out) throw validation_error("short write to '" + path + "'");
}

std::string draws_csv_body(const PosteriorDraws& draws) {
  const Theta& t0 = draws.draws.front();
  std::vector<std::string> cols;
  for (int k = 0; k < t0.psi.count(); ++k) cols.push_back(t0.psi.name(k));
  for (int k = 0; k < t0.q(); ++k)
    for (int j = 0; j < t0.d(); ++j)
      cols.push_back("alpha_" + std::to_string(j + 1) + "_" + std::to_string(k + 1));
  cols.push_back("nu");
  for (int j = 0; j < t0.mu.size(); ++j) cols.push_back("mu_" + std::to_string(j + 1));
  for (int j = 0; j < t0.s.size(); ++j) cols.push_back("s_" + std::to_string(j + 1));
  cols.push_back("log_lik");

  std::ostringstream os;
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (std::size_t r = 0; r < draws.draws.size(); ++r) {
    const Theta& th = draws.draws[r];
    bool first = true;
    auto put = [&](double v) {
      os << (first ? "" : ",") << fmt17(v);
      first = false;
    };
    for (int k = 0; k < th.psi.count(); ++k) put(th.psi.flat(k));
    for (int k = 0; k < th.q(); ++k)
      for (int j = 0; j < th.d(); ++j) put(th.alpha(j, k));
    put(th.nu == kInf ? std::numeric_limits<double>::infinity() : th.nu);
    for (int j = 0; j < th.mu.size(); ++j) put(th.mu(j));
    for (int j = 0; j < th.s.size(); ++j) put(th.s(j));
    put(draws.log_lik[r]);
    os << "\n";
  }
  return os.str();
}

void accumulate_stat(std::map<std::string, std::pair<double, double>>& stats,
                     const std::string& name, double v, int n_total) {
  auto& [mean, m2] = stats[name];
  mean += v / n_total;
  m2 += v * v / n_total;
}

}  // namespace

Json summary_for_fit(const RunConfig& cfg, const PosteriorDraws& draws, const Matrix& data,
                     double wall_seconds) {
  const int n_draws = static_cast<int>(draws.draws.size());
  std::map<std::string, std::pair<double, double>> stats;
  for (const Theta& th : draws.draws) {
    for (int k = 0; k < th.psi.count(); ++k)
      accumulate_stat(stats, th.psi.name(k), th.psi.flat(k), n_draws);
    Matrix omega = correlation_from_angles(th.psi);
    for (int i = 1; i < th.d(); ++i)
      for (int j = 0; j < i; ++j)
        accumulate_stat(stats, "omega_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                        omega(i, j), n_draws);
    if (th.q() > 0) {
      Matrix delta = delta_from_alpha(omega, th.alpha);
      for (int k = 0; k < th.q(); ++k)
        for (int j = 0; j < th.d(); ++j) {
          accumulate_stat(stats, "alpha_" + std::to_string(j + 1) + "_" + std::to_string(k + 1),
                          th.alpha(j, k), n_draws);
          accumulate_stat(stats, "delta_" + std::to_string(j + 1) + "_" + std::to_string(k + 1),
                          delta(k, j), n_draws);
        }
    }
    if (!th.fix_nu) accumulate_stat(stats, "nu", th.nu, n_draws);
    for (int j = 0; j < th.mu.size(); ++j)
      accumulate_stat(stats, "mu_" + std::to_string(j + 1), th.mu(j), n_draws);
    for (int j = 0; j < th.s.size(); ++j)
      accumulate_stat(stats, "s_" + std::to_string(j + 1), th.s(j), n_draws);
  }
  Json mean = Json::object(), sd = Json::object();
  for (const auto& [name, ms] : stats) {
    mean[name] = ms.first;
    double var = std::max(0.0, ms.second - ms.first * ms.first);
    sd[name] = std::sqrt(var * n_draws / std::max(1, n_draws - 1));
  }

  DicResult dr = dic(draws, data);
  Json acc = Json::object();
  for (std::size_t i = 0; i < draws.component_names.size(); ++i)
    acc[draws.component_names[i]] = draws.acceptance_rates[i];

  Json point;
  try {
    point = theta_to_json(posterior_mean_theta(draws));
  } catch (const std::exception&) {
    auto it = std::max_element(draws.log_lik.begin(), draws.log_lik.end());
    point = theta_to_json(draws.draws[static_cast<std::size_t>(it - draws.log_lik.begin())]);
  }

  Json out;
  out["mode"] = cfg.mode;
  out["version"] = kVersion;
  out["n"] = static_cast<int>(data.rows());
  out["d"] = draws.d;
  out["q"] = draws.q;
  out["n_draws"] = n_draws;
  out["dic"] = dr.dic;
  out["dic_plug_in_fallback"] = dr.plug_in_fallback;
  out["mean_log_lik"] = dr.mean_log_lik;
  out["log_lik_at_mean"] = dr.log_lik_at_mean;
  out["posterior_mean"] = mean;
  out["posterior_sd"] = sd;
  out["acceptance"] = acc;
  out["point"] = point;
  out["wall_clock_s"] = wall_seconds;
  out["config"] = cfg.echo;
  return out;
}

namespace {

void cmd_simulate(const RunConfig& cfg) {
  if (!cfg.params) throw validation_error("simulate: missing params");
  if (cfg.n_draws < 1) throw validation_error("simulate: n must be positive");
  const std::uint64_t seed = require_seed(cfg);
  Theta th = *cfg.params;
  TrustParams p = build_params(th, cfg.prior.epsilon);
  std::optional<LocationScale> loc;
  if (th.has_loc_scale()) loc = LocationScale{th.mu, th.s};
  RngStream rng(seed, 1);
  SampleResult res = sample(p, loc, cfg.n_draws, rng, cfg.write_latents);

  std::vector<std::string> cols;
  for (int j = 0; j < p.d(); ++j) cols.push_back("y_" + std::to_string(j + 1));

  Json summary;
  summary["mode"] = cfg.mode;
  summary["version"] = kVersion;
  summary["n"] = cfg.n_draws;
  summary["d"] = p.d();
  summary["q"] = p.q();
  Json means = Json::array(), sds = Json::array();
  for (int j = 0; j < p.d(); ++j) {
    double m = res.draws.col(j).mean();
    double v = (res.draws.col(j).array() - m).square().sum() / std::max(1, cfg.n_draws - 1);
    means.push_back(m);
    sds.push_back(std::sqrt(v));
  }
  summary["sample_mean"] = means;
  summary["sample_sd"] = sds;
  summary["config"] = cfg.echo;

  std::filesystem::create_directories(cfg.out_dir);
  write_csv(cfg.out_dir + "/draws.csv", cols, res.draws);
  if (cfg.write_latents) {
    std::vector<std::string> lcols;
    for (int k = 0; k < p.q(); ++k) lcols.push_back("l_" + std::to_string(k + 1));
    lcols.push_back("w");
    Matrix lat(cfg.n_draws, p.q() + 1);
    if (p.q() > 0) lat.leftCols(p.q()) = res.l;
    lat.col(p.q()) = res.w;
    write_csv(cfg.out_dir + "/latents.csv", lcols, lat);
  }
  write_text(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
}

void cmd_fit(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw validation_error(cfg.mode + ": missing data path");
  const std::uint64_t seed = require_seed(cfg);
  CsvTable table = load_csv(cfg.data_path);
  const bool copula = cfg.mode == "fit-copula";

  auto t0 = std::chrono::steady_clock::now();
  RngStream rng(seed, 2);
  PosteriorDraws draws = copula
                             ? fit_copula_mcmc(table.values, cfg.q, cfg.mcmc, cfg.prior, rng, cfg.fix_nu)
                             : run_mcmc(table.values, cfg.q, cfg.mcmc, cfg.prior, rng, cfg.fix_nu);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json summary = summary_for_fit(cfg, draws, table.values, wall);
  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir + "/draws.csv", draws_csv_body(draws));
  write_text(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
}

void cmd_pseudo_obs(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw validation_error("pseudo-obs: missing data path");
  CsvTable table = load_csv(cfg.data_path);
  Matrix u = pseudo_observations(table.values);
  std::filesystem::create_directories(cfg.out_dir);
  write_csv(cfg.out_dir + "/pseudo.csv", table.columns, u);
}

void cmd_dependence(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  Theta th = point_for(cfg);
  TrustParams p = build_params(th, cfg.prior.epsilon);
  RngStream rng(seed, 3);

  Json pairs = Json::array();
  std::ostringstream grid_csv;
  grid_csv << "pair_i,pair_j,kappa,lambda_ll,lambda_ur,lambda_lr,lambda_ul,major,minor\n";
  for (int i = 1; i < p.d(); ++i) {
    for (int j = 0; j < i; ++j) {
      double tau = kendall(p, i, j, cfg.qmc, rng);
      double rho = spearman(p, i, j, cfg.qmc, rng);
      QuantileDependence lam = quantile_dependence(p, i, j, cfg.dependence.kappa, cfg.qmc, rng);
      AsymmetryMeasures asym = asymmetry_measures(lam);
      Json pj;
      pj["i"] = i + 1;
      pj["j"] = j + 1;
      pj["kendall"] = tau;
      pj["spearman"] = rho;
      pj["kappa"] = cfg.dependence.kappa;
      pj["lambda"] = {{"ll", lam.ll}, {"ur", lam.ur}, {"lr", lam.lr}, {"ul", lam.ul}};
      pj["major"] = asym.major;
      pj["minor"] = asym.minor;
      pairs.push_back(pj);
      for (double k : cfg.dependence.kappa_grid) {
        QuantileDependence lk = quantile_dependence(p, i, j, k, cfg.qmc, rng);
        AsymmetryMeasures ak = asymmetry_measures(lk);
        grid_csv << (i + 1) << "," << (j + 1) << "," << fmt17(k) << "," << fmt17(lk.ll) << ","
                 << fmt17(lk.ur) << "," << fmt17(lk.lr) << "," << fmt17(lk.ul) << ","
                 << fmt17(ak.major) << "," << fmt17(ak.minor) << "\n";
      }
    }
  }
  Json out;
  out["mode"] = cfg.mode;
  out["version"] = kVersion;
  out["kappa"] = cfg.dependence.kappa;
  out["pairs"] = pairs;
  out["point"] = theta_to_json(th);
  out["config"] = cfg.echo;
  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir + "/dependence.json", out.dump(2) + "\n");
  write_text(cfg.out_dir + "/kappa_grid.csv", grid_csv.str());
}

Vector score_rows_at(const Theta& th, const Matrix& u, const McmcConfig& mcfg,
                     double eps) {
  TrustParams p = build_params(th, eps);
  if (u.cols() != p.d()) throw validation_error("score: column count mismatch with fitted model");
  if ((u.array() <= 0.0).any() || (u.array() >= 1.0).any())
    throw validation_error("score: held-out data must lie strictly inside (0,1)");
  auto grid = std::make_shared<EnvelopeGrid>(p.nu(), mcfg.grid_knots);
  std::vector<MarginalTable> tabs;
  for (int j = 0; j < p.d(); ++j) tabs.emplace_back(p, j, grid, mcfg.cheb_points);
  Vector out(u.rows());
  Vector z(p.d());
  for (int i = 0; i < u.rows(); ++i) {
    double marg = 0.0;
    for (int j = 0; j < p.d(); ++j) {
      z(j) = tabs[j].quantile(u(i, j));
      marg += tabs[j].log_pdf(z(j));
    }
    out(i) = log_pdf_joint(z, p) - marg;
  }
  return out;
}

void cmd_score(const RunConfig& cfg) {
  if (cfg.held_out_path.empty()) throw validation_error("score: missing held_out path");
  Theta th = point_for(cfg);
  CsvTable held = load_csv(cfg.held_out_path);
  Vector scores = score_rows_at(th, held.values, cfg.mcmc, cfg.prior.epsilon);

  std::optional<Vector> base;
  if (!cfg.baseline_summary_path.empty()) {
    RunConfig alt = cfg;
    alt.summary_path = cfg.baseline_summary_path;
    alt.params.reset();
    Theta th_base = point_for(alt);
    base = score_rows_at(th_base, held.values, cfg.mcmc, cfg.prior.epsilon);
  }

  std::ostringstream os;
  os << "row,log_score,cum_log_score";
  if (base) os << ",log_score_base,cum_diff";
  os << "\n";
  double run = 0.0, run_base = 0.0;
  for (int i = 0; i < scores.size(); ++i) {
    run += scores(i);
    os << (i + 1) << "," << fmt17(scores(i)) << "," << fmt17(run);
    if (base) {
      run_base += (*base)(i);
      os << "," << fmt17((*base)(i)) << "," << fmt17(run - run_base);
    }
    os << "\n";
  }
  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir + "/scores.csv", os.str());
}

void cmd_density_grid(const RunConfig& cfg) {
  Theta th = point_for(cfg);
  TrustParams p = build_params(th, cfg.prior.epsilon);
  const GridSpec& g = cfg.grid;
  if (g.pair_i < 0 || g.pair_j < 0 || g.pair_i >= p.d() || g.pair_j >= p.d() ||
      g.pair_i == g.pair_j)
    throw validation_error("density-grid: invalid pair");

  std::vector<int> rest;
  for (int k = 0; k < p.d(); ++k)
    if (k != g.pair_i && k != g.pair_j) rest.push_back(k);
  if (g.u_space) {
    if (p.d() != 2) throw validation_error("density-grid: u-space grids need d = 2");
    if (!(g.lo > 0.0 && g.hi < 1.0))
      throw validation_error("density-grid: u-space bounds must lie inside (0,1)");
  } else if (!rest.empty()) {
    if (g.condition.size() != static_cast<int>(rest.size()))
      throw validation_error("density-grid: condition must fix the remaining " +
                             std::to_string(rest.size()) + " coordinates");
  }

  std::ostringstream os;
  os << (g.u_space ? "u1,u2,density\n" : "z1,z2,density\n");
  const double step = (g.hi - g.lo) / (g.n - 1);
  std::vector<int> idx1 = {g.pair_i, g.pair_j};

  std::shared_ptr<EnvelopeGrid> egrid;
  std::vector<std::shared_ptr<MarginalTable>> tabs;
  if (g.u_space) {
    egrid = std::make_shared<EnvelopeGrid>(p.nu(), cfg.mcmc.grid_knots);
    tabs = {std::make_shared<MarginalTable>(p, 0, egrid, cfg.mcmc.cheb_points),
            std::make_shared<MarginalTable>(p, 1, egrid, cfg.mcmc.cheb_points)};
  }

  Vector z2(rest.size());
  for (std::size_t r = 0; r < rest.size(); ++r) z2(static_cast<int>(r)) = g.condition(static_cast<int>(r));
  for (int a = 0; a < g.n; ++a) {
    const double x = g.lo + step * a;
    for (int b = 0; b < g.n; ++b) {
      const double y = g.lo + step * b;
      double dens;
      if (g.u_space) {
        const double zi = tabs[0]->quantile(x);
        const double zj = tabs[1]->quantile(y);
        Vector z(2);
        z << zi, zj;
        dens = std::exp(log_pdf_joint(z, p) - tabs[0]->log_pdf(zi) - tabs[1]->log_pdf(zj));
      } else if (rest.empty()) {
        Vector z(2);
        z << x, y;
        dens = std::exp(log_pdf_joint(z, p));
      } else {
        Vector z1(2);
        z1 << x, y;
        dens = std::exp(log_pdf_conditional(z1, z2, idx1, rest, p));
      }
      os << fmt17(x) << "," << fmt17(y) << "," << fmt17(dens) << "\n";
    }
  }
  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir + "/grid.csv", os.str());
}

}  // namespace

void run_command(const RunConfig& cfg) {
  if (cfg.mode == "simulate")
    cmd_simulate(cfg);
  else if (cfg.mode == "fit-dist" || cfg.mode == "fit-copula")
    cmd_fit(cfg);
  else if (cfg.mode == "pseudo-obs")
    cmd_pseudo_obs(cfg);
  else if (cfg.mode == "dependence")
    cmd_dependence(cfg);
  else if (cfg.mode == "score")
    cmd_score(cfg);
  else if (cfg.mode == "density-grid")
    cmd_density_grid(cfg);
  else
    throw validation_error("unknown mode '" + cfg.mode + "'");
}

}  // namespace trust
