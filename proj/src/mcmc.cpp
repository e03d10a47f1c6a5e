#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "trust/density.hpp"
#include "trust/errors.hpp"
#include "trust/inference.hpp"
#include "trust/samplers.hpp"
#include "trust/student_t.hpp"

namespace trust {

TrustParams build_params(const Theta& th, double eps) {
  Matrix omega = correlation_from_angles(th.psi, eps);
  return TrustParams::make(std::move(omega), th.alpha, th.nu);
}

double log_extended_likelihood_z(const TrustParams& p, const LatentState& lat,
                                 const Matrix& z, double log_det_s_sum, bool) {
  const int n = static_cast<int>(z.rows());
  const int d = p.d(), q = p.q();
  if (lat.w.size() != n || lat.l.rows() != n || lat.l.cols() != q)
    throw domain_error("log_extended_likelihood: latent dimensions mismatch");
  if ((lat.w.array() <= 0.0).any()) return -kInf;

  Matrix resid = z;
  if (q > 0) resid -= lat.l * p.cross().transpose();
  Matrix a = p.cond_chol().triangularView<Eigen::Lower>().solve(resid.transpose());
  Vector quad1 = a.colwise().squaredNorm();

  double total = 0.0;
  const double c1 = -0.5 * d * std::log(2.0 * M_PI) - 0.5 * p.log_det_cond();
  Vector log_w = lat.w.array().log();
  total += n * c1 + 0.5 * d * log_w.sum() - 0.5 * lat.w.dot(quad1);

  if (q > 0) {
    if ((lat.l.array() <= 0.0).any()) return -kInf;
    Matrix b = p.sigma_chol().triangularView<Eigen::Lower>().solve(lat.l.transpose());
    Vector quad2 = b.colwise().squaredNorm();
    const double c2 = -0.5 * q * std::log(2.0 * M_PI) - 0.5 * p.log_det_sigma() -
                      std::log(p.orthant_sigma());
    total += n * c2 + 0.5 * q * log_w.sum() - 0.5 * lat.w.dot(quad2);
  }

  if (!p.gaussian()) {
    const double half_nu = 0.5 * p.nu();
    const double cg = half_nu * std::log(half_nu) - std::lgamma(half_nu);
    total += n * cg + (half_nu - 1.0) * log_w.sum() - half_nu * lat.w.sum();
  }
  return total - n * log_det_s_sum;
}

double log_extended_likelihood(const Theta& th, const LatentState& lat, const Matrix& y) {
  TrustParams p = build_params(th);
  Matrix z = y;
  double log_det_s = 0.0;
  if (th.has_loc_scale()) {
    if ((th.s.array() <= 0.0).any()) throw domain_error("log_extended_likelihood: s <= 0");
    z = (y.rowwise() - th.mu.transpose()).array().rowwise() / th.s.transpose().array();
    log_det_s = th.s.array().log().sum();
  }
  return log_extended_likelihood_z(p, lat, z, log_det_s, p.gaussian());
}

namespace {

double prior_given_params(const Theta& th, const PriorConfig& cfg, const TrustParams& params) {
  if (!params.h_ascending()) return -kInf;  // 1(Delta in P(Omega))
  double lp = 0.0;
  for (int k = 0; k < th.psi.count(); ++k) {
    auto [lo, hi] = th.psi.bounds(k, cfg.epsilon);
    if (!(th.psi.flat(k) > lo && th.psi.flat(k) < hi)) return -kInf;
    lp -= std::log(hi - lo);
  }
  const double va = cfg.alpha_variance;
  lp += -0.5 * th.alpha.size() * std::log(2.0 * M_PI * va) -
        0.5 * th.alpha.squaredNorm() / va;
  if (!th.fix_nu) {
    if (!(th.nu > cfg.nu_shift)) return -kInf;
    lp += gamma_log_pdf(th.nu - cfg.nu_shift, cfg.nu_shape, cfg.nu_rate);
  }
  if (th.has_loc_scale()) {
    if ((th.s.array() <= 0.0).any()) return -kInf;
    if (cfg.reference_loc_scale) lp -= th.s.array().log().sum();
  }
  return lp;
}

}  // namespace

double log_prior(const Theta& th, const PriorConfig& cfg) {
  try {
    TrustParams p = build_params(th, cfg.epsilon);
    return prior_given_params(th, cfg, p);
  } catch (const constraint_error&) {
    return -kInf;
  } catch (const domain_error&) {
    return -kInf;
  }
}

Matrix step1_sample_l(const TrustParams& p, const Vector& w, const Matrix& z, RngStream& rng) {
  const int n = static_cast<int>(z.rows());
  const int q = p.q();
  if (w.size() != n) throw domain_error("step1_sample_l: w length mismatch");
  Matrix mean = z * (p.omega_inv() * p.delta().transpose());  // m_ik = delta_k' Omega^{-1} z_i
  Matrix l(n, q);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < q; ++k) {
      const double r = p.h()(k);
      l(i, k) = sample_trunc_normal_lower(mean(i, k), r / w(i), rng);
    }
  }
  return l;
}

Vector step2_sample_w(const TrustParams& p, const Matrix& l, const Matrix& z, double nu,
                      RngStream& rng) {
  const int n = static_cast<int>(z.rows());
  if (nu == kInf) return Vector::Ones(n);
  const int d = p.d(), q = p.q();
  const double a = 0.5 * (d + q + nu);
  Matrix resid = z;
  if (q > 0) resid -= l * p.cross().transpose();
  Matrix t1 = p.cond_chol().triangularView<Eigen::Lower>().solve(resid.transpose());
  Vector quad1 = t1.colwise().squaredNorm();
  Vector quad2 = Vector::Zero(n);
  if (q > 0) {
    Matrix t2 = p.sigma_chol().triangularView<Eigen::Lower>().solve(l.transpose());
    quad2 = t2.colwise().squaredNorm();
  }
  Vector w(n);
  for (int i = 0; i < n; ++i) {
    const double b = 0.5 * (quad1(i) + quad2(i) + nu);
    w(i) = rng.gamma(a, b);
  }
  return w;
}

namespace {

struct ComponentRef {
  enum class Kind { Angle, Alpha, Nu, Mu, Scale } kind;
  int a = 0;  // flat angle index / alpha row / mu,s index
  int b = 0;  // alpha column
  std::string name;
};

std::vector<ComponentRef> list_components(const Theta& th) {
  std::vector<ComponentRef> out;
  for (int k = 0; k < th.psi.count(); ++k)
    out.push_back({ComponentRef::Kind::Angle, k, 0, th.psi.name(k)});
  for (int k = 0; k < th.q(); ++k)
    for (int j = 0; j < th.d(); ++j)
      out.push_back({ComponentRef::Kind::Alpha, j, k,
                     "alpha_" + std::to_string(j + 1) + "_" + std::to_string(k + 1)});
  if (!th.fix_nu) out.push_back({ComponentRef::Kind::Nu, 0, 0, "nu"});
  for (int j = 0; j < th.mu.size(); ++j)
    out.push_back({ComponentRef::Kind::Mu, j, 0, "mu_" + std::to_string(j + 1)});
  for (int j = 0; j < th.s.size(); ++j)
    out.push_back({ComponentRef::Kind::Scale, j, 0, "s_" + std::to_string(j + 1)});
  return out;
}

double logit_in(double x, double lo, double hi) { return std::log((x - lo) / (hi - x)); }

double expit_in(double x, double lo, double hi) {
  return lo + (hi - lo) / (1.0 + std::exp(-x));
}

double get_transformed(const Theta& th, const ComponentRef& c, const PriorConfig& cfg) {
  switch (c.kind) {
    case ComponentRef::Kind::Angle: {
      auto [lo, hi] = th.psi.bounds(c.a, cfg.epsilon);
      return logit_in(th.psi.flat(c.a), lo, hi);
    }
    case ComponentRef::Kind::Alpha:
      return th.alpha(c.a, c.b);
    case ComponentRef::Kind::Nu:
      return std::log(th.nu - cfg.nu_shift);
    case ComponentRef::Kind::Mu:
      return th.mu(c.a);
    case ComponentRef::Kind::Scale:
      return std::log(th.s(c.a));
  }
  return 0.0;
}

void set_transformed(Theta& th, const ComponentRef& c, double x, const PriorConfig& cfg) {
  switch (c.kind) {
    case ComponentRef::Kind::Angle: {
      auto [lo, hi] = th.psi.bounds(c.a, cfg.epsilon);
      th.psi.flat(c.a) = expit_in(x, lo, hi);
      break;
    }
    case ComponentRef::Kind::Alpha:
      th.alpha(c.a, c.b) = x;
      break;
    case ComponentRef::Kind::Nu:
      th.nu = cfg.nu_shift + std::exp(x);
      break;
    case ComponentRef::Kind::Mu:
      th.mu(c.a) = x;
      break;
    case ComponentRef::Kind::Scale:
      th.s(c.a) = std::exp(x);
      break;
  }
}

// log |d(natural)/d(transformed)| for the updated component.
double log_jacobian(const Theta& th, const ComponentRef& c, const PriorConfig& cfg) {
  switch (c.kind) {
    case ComponentRef::Kind::Angle: {
      auto [lo, hi] = th.psi.bounds(c.a, cfg.epsilon);
      const double v = th.psi.flat(c.a);
      return std::log((v - lo) * (hi - v) / (hi - lo));
    }
    case ComponentRef::Kind::Alpha:
    case ComponentRef::Kind::Mu:
      return 0.0;
    case ComponentRef::Kind::Nu:
      return std::log(th.nu - cfg.nu_shift);
    case ComponentRef::Kind::Scale:
      return std::log(th.s(c.a));
  }
  return 0.0;
}

enum class Mode { Distribution, Copula };

class Sampler {
 public:
  Sampler(Mode mode, const Matrix& data, int q, McmcConfig cfg, PriorConfig prior,
          RngStream& rng, std::optional<double> fix_nu)
      : mode_(mode), data_(data), q_(q), cfg_(cfg), prior_(prior), rng_(rng),
        fix_nu_(fix_nu) {
    n_ = static_cast<int>(data.rows());
    d_ = static_cast<int>(data.cols());
    if (q_ < 0 || q_ > 3) throw validation_error("q must be in {0,1,2,3}");
    if (n_ < d_ + q_ + 2) throw validation_error("need at least d+q+2 observations");
    if (mode_ == Mode::Copula) {
      if ((data_.array() <= 0.0).any() || (data_.array() >= 1.0).any())
        throw validation_error("copula data must lie strictly inside (0,1)");
    }
  }

  PosteriorDraws run();

 private:
  struct Eval {
    TrustParams params{TrustParams::make(Matrix::Identity(1, 1), Matrix(1, 0), 10.0)};
    Matrix z;
    double ext_ll = 0.0;
    double marg_sum = 0.0;
    double prior = 0.0;
    std::shared_ptr<const EnvelopeGrid> grid;
    std::vector<std::shared_ptr<const MarginalTable>> tables;
    double target() const { return ext_ll - marg_sum + prior; }
  };

  bool evaluate(const Theta& th, const LatentState& lat, const Eval* reuse, Eval& out) const;
  Theta initial_theta() const;
  void permute_alpha_steps(const std::vector<int>& order);
  double conventional_log_lik(const Theta& th, const Eval& ev) const;

  Mode mode_;
  Matrix data_;
  int n_ = 0, d_ = 0, q_ = 0;
  McmcConfig cfg_;
  PriorConfig prior_;
  RngStream& rng_;
  std::optional<double> fix_nu_;

  std::vector<ComponentRef> comps_;
  std::vector<double> log_step_;
  std::vector<long> prop_count_, acc_count_;
  int alpha_offset_ = 0;
};

bool Sampler::evaluate(const Theta& th, const LatentState& lat, const Eval* reuse,
                       Eval& out) const {
  try {
    out.params = build_params(th, prior_.epsilon);
  } catch (const constraint_error&) {
    return false;
  } catch (const domain_error&) {
    return false;
  }
  out.prior = prior_given_params(th, prior_, out.params);
  if (out.prior == -kInf) return false;

  double log_det_s = 0.0;
  if (mode_ == Mode::Distribution) {
    out.z = (data_.rowwise() - th.mu.transpose()).array().rowwise() /
            th.s.transpose().array();
    log_det_s = th.s.array().log().sum();
    out.marg_sum = 0.0;
  } else {
    try {
      if (reuse && reuse->grid && reuse->grid->nu() == th.nu)
        out.grid = reuse->grid;
      else
        out.grid = std::make_shared<EnvelopeGrid>(th.nu, cfg_.grid_knots);
      out.tables.assign(d_, nullptr);
      out.z.resize(n_, d_);
      out.marg_sum = 0.0;
      for (int j = 0; j < d_; ++j) {
        auto tab = std::make_shared<MarginalTable>(out.params, j, out.grid, cfg_.cheb_points);
        for (int i = 0; i < n_; ++i) {
          const double z = tab->quantile(data_(i, j));
          out.z(i, j) = z;
          out.marg_sum += tab->log_pdf(z);
        }
        out.tables[j] = std::move(tab);
      }
    } catch (const constraint_error&) {
      return false;
    } catch (const numeric_error&) {
      return false;
    }
  }
  out.ext_ll = log_extended_likelihood_z(out.params, lat, out.z, log_det_s,
                                         out.params.gaussian());
  return std::isfinite(out.ext_ll) && std::isfinite(out.marg_sum);
}

Theta Sampler::initial_theta() const {
  Theta th;
  th.psi = AngleSet(d_);
  th.alpha = Matrix::Zero(d_, q_);
  th.nu = fix_nu_ ? *fix_nu_ : 10.0;
  th.fix_nu = fix_nu_.has_value();

  Matrix z0;
  if (mode_ == Mode::Distribution) {
    Vector mu = data_.colwise().mean();
    Vector sd(d_);
    for (int j = 0; j < d_; ++j) {
      double v = (data_.col(j).array() - mu(j)).square().sum() / std::max(1, n_ - 1);
      if (!(v > 0.0)) throw validation_error("column " + std::to_string(j + 1) + " is degenerate");
      sd(j) = std::sqrt(v);
    }
    th.mu = mu;
    th.s = sd;
    z0 = (data_.rowwise() - mu.transpose()).array().rowwise() / sd.transpose().array();
  } else {
    z0.resize(n_, d_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < d_; ++j) z0(i, j) = normal_quantile(data_(i, j));
  }

  Matrix corr = (z0.transpose() * z0) / std::max(1, n_ - 1);
  corr = to_correlation(corr);
  for (double shrink : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    Matrix c = (1.0 - shrink) * corr + shrink * Matrix::Identity(d_, d_);
    try {
      th.psi = corr_to_angles(c, prior_.epsilon);
      break;
    } catch (const constraint_error&) {
      if (shrink == 1.0) throw numeric_error("mcmc initialization failed on correlation start");
    }
  }

  RngStream init_rng = rng_.substream(0xA11CE);
  for (int j = 0; j < d_; ++j)
    for (int k = 0; k < q_; ++k) th.alpha(j, k) = 0.1 * init_rng.normal();
  return th;
}

void Sampler::permute_alpha_steps(const std::vector<int>& order) {
  bool identity = true;
  for (int k = 0; k < static_cast<int>(order.size()); ++k)
    if (order[k] != k) identity = false;
  if (identity) return;
  auto permute = [&](std::vector<double>& v) {
    std::vector<double> nw(v);
    for (int k = 0; k < q_; ++k)
      for (int j = 0; j < d_; ++j)
        nw[alpha_offset_ + k * d_ + j] = v[alpha_offset_ + order[k] * d_ + j];
    v = nw;
  };
  auto permute_l = [&](std::vector<long>& v) {
    std::vector<long> nw(v);
    for (int k = 0; k < q_; ++k)
      for (int j = 0; j < d_; ++j)
        nw[alpha_offset_ + k * d_ + j] = v[alpha_offset_ + order[k] * d_ + j];
    v = nw;
  };
  permute(log_step_);
  permute_l(prop_count_);
  permute_l(acc_count_);
}

double Sampler::conventional_log_lik(const Theta& th, const Eval& ev) const {
  double total = 0.0;
  for (int i = 0; i < n_; ++i) total += log_pdf_joint(ev.z.row(i).transpose(), ev.params);
  if (mode_ == Mode::Distribution) total -= n_ * th.s.array().log().sum();
  else total -= ev.marg_sum;
  return total;
}

PosteriorDraws Sampler::run() {
  Theta th = initial_theta();

  // A valid start: identify, then one pass of steps 1-2 from w = 1.
  {
    TrustParams p0 = build_params(th, prior_.epsilon);
    auto [ident, order] = identify_with_order(p0);
    Matrix alpha_sorted(d_, q_);
    for (int k = 0; k < q_; ++k) alpha_sorted.col(k) = th.alpha.col(order[k]);
    th.alpha = alpha_sorted;
  }

  comps_ = list_components(th);
  alpha_offset_ = th.psi.count();
  log_step_.assign(comps_.size(), std::log(0.2));
  prop_count_.assign(comps_.size(), 0);
  acc_count_.assign(comps_.size(), 0);

  LatentState lat;
  lat.w = Vector::Ones(n_);
  lat.l = Matrix::Zero(n_, q_);

  Eval cur;
  {
    // initial z for step 1 before the full evaluation
    Eval boot;
    if (!evaluate(th, LatentState{Matrix::Constant(n_, q_, 1.0), Vector::Ones(n_)}, nullptr,
                  boot))
      throw numeric_error("mcmc initialization failed: invalid starting point");
    if (q_ > 0) lat.l = step1_sample_l(boot.params, lat.w, boot.z, rng_);
    lat.w = step2_sample_w(boot.params, lat.l, boot.z, th.nu, rng_);
    if (!evaluate(th, lat, &boot, cur))
      throw numeric_error("mcmc initialization failed: invalid starting point");
  }

  const int total_sweeps = cfg_.n_burn + cfg_.n_keep * cfg_.thin;
  PosteriorDraws out;
  out.d = d_;
  out.q = q_;
  out.copula = (mode_ == Mode::Copula);
  out.cfg = cfg_;
  out.prior = prior_;
  for (const auto& c : comps_) out.component_names.push_back(c.name);
  out.draws.reserve(cfg_.n_keep);

  std::vector<int> visit(comps_.size());
  std::iota(visit.begin(), visit.end(), 0);

  for (int sweep = 1; sweep <= total_sweeps; ++sweep) {
    // Steps 1-2: latent refresh.
    if (q_ > 0) lat.l = step1_sample_l(cur.params, lat.w, cur.z, rng_);
    lat.w = step2_sample_w(cur.params, lat.l, cur.z, th.nu, rng_);
    cur.ext_ll = log_extended_likelihood_z(
        cur.params, lat, cur.z,
        mode_ == Mode::Distribution ? th.s.array().log().sum() : 0.0, cur.params.gaussian());

    // Step 3: one-at-a-time adaptive random walk over shuffled components.
    for (int i = static_cast<int>(visit.size()) - 1; i > 0; --i)
      std::swap(visit[i], visit[static_cast<int>(rng_.uniform() * (i + 1))]);

    const bool adapting = sweep <= cfg_.n_burn;
    const double gamma =
        std::pow(1.0 + static_cast<double>(sweep) / cfg_.adapt_window, -0.6);

    for (int idx : visit) {
      const ComponentRef& c = comps_[idx];
      Theta cand = th;
      const double x_cur = get_transformed(th, c, prior_);
      set_transformed(cand, c, x_cur + std::exp(log_step_[idx]) * rng_.normal(), prior_);

      double acc_prob = 0.0;
      Eval cand_eval;
      LatentState cand_lat = lat;
      std::vector<int> order;
      bool ok = true;
      try {
        TrustParams raw = build_params(cand, prior_.epsilon);
        order = h_order(raw.h());
        bool sorted = std::is_sorted(order.begin(), order.end());
        if (!sorted) {
          Matrix alpha_sorted(d_, q_);
          Matrix l_sorted(n_, q_);
          for (int k = 0; k < q_; ++k) {
            alpha_sorted.col(k) = cand.alpha.col(order[k]);
            l_sorted.col(k) = lat.l.col(order[k]);
          }
          cand.alpha = alpha_sorted;
          cand_lat.l = l_sorted;
        }
      } catch (const constraint_error&) {
        ok = false;
      } catch (const domain_error&) {
        ok = false;
      }
      if (ok) ok = evaluate(cand, cand_lat, &cur, cand_eval);
      if (ok) {
        const double delta = cand_eval.target() + log_jacobian(cand, c, prior_) -
                             (cur.target() + log_jacobian(th, c, prior_));
        acc_prob = std::min(1.0, std::exp(std::min(0.0, delta)));
        if (std::log(rng_.uniform()) < delta) {
          th = std::move(cand);
          lat.l = std::move(cand_lat.l);
          cur = std::move(cand_eval);
          permute_alpha_steps(order);
          ++acc_count_[idx];
        }
      } else {
        // invalid proposals are rejections; still consumes the accept draw
        rng_.uniform();
      }
      ++prop_count_[idx];
      if (adapting)
        log_step_[idx] += gamma * (acc_prob - cfg_.target_acceptance);
    }

    if (sweep > cfg_.n_burn && (sweep - cfg_.n_burn) % cfg_.thin == 0) {
      out.draws.push_back(th);
      out.log_lik.push_back(conventional_log_lik(th, cur));
      out.ext_log_post.push_back(cur.target());
    }
  }

  out.acceptance_rates.resize(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i)
    out.acceptance_rates[i] =
        prop_count_[i] ? static_cast<double>(acc_count_[i]) / prop_count_[i] : 0.0;
  return out;
}

}  // namespace

PosteriorDraws run_mcmc(const Matrix& y, int q, const McmcConfig& cfg,
                        const PriorConfig& prior, RngStream& rng,
                        std::optional<double> fix_nu) {
  Sampler s(Mode::Distribution, y, q, cfg, prior, rng, fix_nu);
  return s.run();
}

PosteriorDraws fit_copula_mcmc(const Matrix& u, int q, const McmcConfig& cfg,
                               const PriorConfig& prior, RngStream& rng,
                               std::optional<double> fix_nu) {
  Sampler s(Mode::Copula, u, q, cfg, prior, rng, fix_nu);
  return s.run();
}

double log_lik_at(const Theta& th, const Matrix& y, bool copula, const McmcConfig& cfg) {
  TrustParams p = build_params(th);
  const int n = static_cast<int>(y.rows());
  double total = 0.0;
  if (!copula) {
    Matrix z = (y.rowwise() - th.mu.transpose()).array().rowwise() / th.s.transpose().array();
    for (int i = 0; i < n; ++i) total += log_pdf_joint(z.row(i).transpose(), p);
    total -= n * th.s.array().log().sum();
    return total;
  }
  auto grid = std::make_shared<EnvelopeGrid>(th.nu, cfg.grid_knots);
  Matrix z(n, p.d());
  double marg = 0.0;
  for (int j = 0; j < p.d(); ++j) {
    MarginalTable tab(p, j, grid, cfg.cheb_points);
    for (int i = 0; i < n; ++i) {
      z(i, j) = tab.quantile(y(i, j));
      marg += tab.log_pdf(z(i, j));
    }
  }
  for (int i = 0; i < n; ++i) total += log_pdf_joint(z.row(i).transpose(), p);
  return total - marg;
}

Theta posterior_mean_theta(const PosteriorDraws& draws) {
  if (draws.draws.empty()) throw domain_error("posterior_mean_theta: empty chain");
  const Theta& first = draws.draws.front();
  auto comps = list_components(first);
  Vector acc = Vector::Zero(comps.size());
  for (const auto& th : draws.draws) {
    for (std::size_t i = 0; i < comps.size(); ++i)
      acc(i) += get_transformed(th, comps[i], draws.prior);
  }
  acc /= static_cast<double>(draws.draws.size());
  Theta mean = first;
  for (std::size_t i = 0; i < comps.size(); ++i)
    set_transformed(mean, comps[i], acc(i), draws.prior);
  TrustParams p = build_params(mean, draws.prior.epsilon);
  auto [ident, order] = identify_with_order(p);
  Matrix alpha_sorted(mean.d(), mean.q());
  for (int k = 0; k < mean.q(); ++k) alpha_sorted.col(k) = mean.alpha.col(order[k]);
  mean.alpha = alpha_sorted;
  return mean;
}

DicResult dic(const PosteriorDraws& draws, const Matrix& y) {
  if (draws.draws.empty() || draws.log_lik.empty())
    throw domain_error("dic: empty chain");
  DicResult out;
  out.mean_log_lik =
      std::accumulate(draws.log_lik.begin(), draws.log_lik.end(), 0.0) /
      static_cast<double>(draws.log_lik.size());
  bool ok = true;
  double plug = 0.0;
  try {
    Theta mean = posterior_mean_theta(draws);
    plug = log_lik_at(mean, y, draws.copula, draws.cfg);
    if (!std::isfinite(plug)) ok = false;
  } catch (const std::exception&) {
    ok = false;
  }
  if (!ok) {
    auto it = std::max_element(draws.log_lik.begin(), draws.log_lik.end());
    plug = *it;
    out.plug_in_fallback = true;
  }
  out.log_lik_at_mean = plug;
  out.dic = -4.0 * out.mean_log_lik + 2.0 * plug;
  return out;
}

}  // namespace trust
