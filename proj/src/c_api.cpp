#include "rician/rician.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "rician/error.hpp"
#include "rician/estimators.hpp"
#include "rician/io.hpp"
#include "rician/mcmc.hpp"
#include "rician/objective_bayes.hpp"
#include "rician/predictive.hpp"
#include "rician/special_functions.hpp"
#include "rician/study.hpp"

struct rician_sample {
  rician::Sample value;
};

struct rician_chain {
  rician::Chain value;
};

struct rician_predictive {
  rician::PredictiveDraws value;
};

struct rician_study {
  rician::StudyTable value;
  std::vector<std::string> names;
};

namespace {

thread_local std::string g_error;
thread_local std::size_t g_error_line = 0;

rician_status fail(rician_status code, const std::string& msg, std::size_t line = 0) {
  g_error = msg;
  g_error_line = line;
  return code;
}

template <class F>
rician_status guarded(F&& body) {
  try {
    body();
    g_error.clear();
    g_error_line = 0;
    return RICIAN_OK;
  } catch (const rician::ParseError& e) {
    return fail(RICIAN_E_PARSE, e.what(), e.line());
  } catch (const rician::ProprietyError& e) {
    return fail(RICIAN_E_IMPROPER, e.what());
  } catch (const rician::SingularMatrixError& e) {
    return fail(RICIAN_E_SINGULAR, e.what());
  } catch (const rician::ConvergenceError& e) {
    return fail(RICIAN_E_CONVERGENCE, e.what());
  } catch (const rician::DomainError& e) {
    return fail(RICIAN_E_DOMAIN, e.what());
  } catch (const rician::Error& e) {
    return fail(RICIAN_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RICIAN_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RICIAN_E_INTERNAL, e.what());
  }
}

#define RICIAN_REQUIRE(cond)                                                  \
  do {                                                                        \
    if (!(cond)) return fail(RICIAN_E_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

rician::PriorSpec to_spec(const rician_prior& p) {
  switch (p.family) {
    case RICIAN_PRIOR_POWER:
      return rician::PriorSpec::power(p.epsilon);
    case RICIAN_PRIOR_JEFFREYS:
      return rician::PriorSpec::jeffreys();
    case RICIAN_PRIOR_CUSTOM_TAILS:
      return rician::PriorSpec::custom_tails(p.r0, p.r_inf, p.k);
  }
  throw rician::DomainError("unknown prior family");
}

rician_prior from_spec(const rician::PriorSpec& s) {
  rician_prior p{};
  const auto t = s.tails();
  p.r0 = t.r0;
  p.r_inf = t.r_inf;
  p.k = t.k;
  switch (s.family()) {
    case rician::PriorFamily::kPower:
      p.family = RICIAN_PRIOR_POWER;
      p.epsilon = s.epsilon();
      break;
    case rician::PriorFamily::kJeffreys:
      p.family = RICIAN_PRIOR_JEFFREYS;
      break;
    case rician::PriorFamily::kCustomTails:
      p.family = RICIAN_PRIOR_CUSTOM_TAILS;
      break;
  }
  return p;
}

rician::McmcConfig to_config(const rician_mcmc_config& c) {
  rician::McmcConfig m;
  m.iterations = c.iterations;
  m.burn_in = c.burn_in;
  m.thin = c.thin;
  m.chains = c.chains;
  m.d_eta = c.d_eta;
  m.d_alpha = c.d_alpha;
  m.seed = c.seed;
  m.prior = to_spec(c.prior);
  m.allow_improper = c.allow_improper != 0;
  return m;
}

rician_mcmc_config from_config(const rician::McmcConfig& m) {
  rician_mcmc_config c{};
  c.iterations = m.iterations;
  c.burn_in = m.burn_in;
  c.thin = m.thin;
  c.chains = m.chains;
  c.d_eta = m.d_eta;
  c.d_alpha = m.d_alpha;
  c.seed = m.seed;
  c.prior = from_spec(m.prior);
  c.allow_improper = m.allow_improper ? 1 : 0;
  return c;
}

rician_verdict to_verdict(const rician::ProprietyVerdict& v, const rician::PriorSpec& s) {
  rician_verdict out{};
  out.status = static_cast<int>(v.status);
  out.rule = static_cast<int>(v.rule);
  out.min_n = v.min_n ? static_cast<long>(*v.min_n) : -1;
  out.requires_distinct_data = v.requires_distinct_data ? 1 : 0;
  out.boundary_case = v.boundary_case ? 1 : 0;
  const auto t = s.tails();
  out.r0 = t.r0;
  out.r_inf = t.r_inf;
  out.k = t.k;
  return out;
}

rician_estimate to_estimate(const rician::EstimateReport& r) {
  rician_estimate e{};
  e.method = r.method == rician::EstimateMethod::kMoments ? RICIAN_METHOD_MOMENTS
                                                          : RICIAN_METHOD_MLE;
  e.eta = r.eta_hat;
  e.alpha = r.alpha_hat;
  e.converged = r.converged ? 1 : 0;
  e.iterations = r.iterations;
  e.score_residual = r.score_residual;
  e.flags = r.flags;
  return e;
}

rician_param_summary to_summary(const rician::ParamSummary& s) {
  return {s.mean, s.median, s.sd, s.lo, s.hi, s.point};
}

template <class Writer>
void write_to(const char* path, Writer&& w) {
  if (std::string(path) == "-") {
    w(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw rician::Error(std::string("cannot open '") + path + "' for writing");
  w(out);
  out.flush();
  if (!out) throw rician::Error(std::string("write to '") + path + "' failed");
}

}  // namespace

extern "C" {

const char* rician_version(void) { return "1.0.0"; }
const char* rician_last_error(void) { return g_error.c_str(); }
size_t rician_last_error_line(void) { return g_error_line; }

rician_status rician_sample_from_values(const double* values, size_t n, rician_sample** out) {
  RICIAN_REQUIRE(out && (values || n == 0));
  return guarded([&] {
    *out = new rician_sample{rician::Sample(std::vector<double>(values, values + n))};
  });
}

rician_status rician_sample_load(const char* path, rician_sample** out) {
  RICIAN_REQUIRE(path && out);
  return guarded([&] { *out = new rician_sample{rician::load_sample(path)}; });
}

rician_status rician_sample_write(const rician_sample* s, const char* path) {
  RICIAN_REQUIRE(s && path);
  return guarded([&] {
    write_to(path, [&](std::ostream& o) { rician::write_sample(o, s->value); });
  });
}

rician_status rician_sample_simulate(double eta, double alpha, size_t n, uint64_t seed,
                                     rician_sample** out) {
  RICIAN_REQUIRE(out);
  return guarded([&] {
    *out = new rician_sample{rician::sample(rician::RicianParams(eta, alpha), n, seed)};
  });
}

void rician_sample_free(rician_sample* s) { delete s; }
size_t rician_sample_size(const rician_sample* s) { return s ? s->value.size() : 0; }
int rician_sample_all_equal(const rician_sample* s) {
  return s && s->value.all_equal() ? 1 : 0;
}

size_t rician_sample_values(const rician_sample* s, double* out, size_t cap) {
  if (!s || !out) return 0;
  const auto v = s->value.values();
  const size_t n = std::min(cap, v.size());
  std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n), out);
  return n;
}

rician_status rician_pdf(double x, double eta, double alpha, double* out) {
  RICIAN_REQUIRE(out);
  return guarded([&] { *out = rician::pdf(x, rician::RicianParams(eta, alpha)); });
}

rician_status rician_cdf(double x, double eta, double alpha, double* out) {
  RICIAN_REQUIRE(out);
  return guarded([&] { *out = rician::cdf(x, rician::RicianParams(eta, alpha)); });
}

rician_status rician_psi(double rho, double* out) {
  RICIAN_REQUIRE(out);
  return guarded([&] { *out = rician::psi(rho); });
}

rician_status rician_fit_moments(const rician_sample* s, rician_estimate* out) {
  RICIAN_REQUIRE(s && out);
  return guarded([&] { *out = to_estimate(rician::mm_estimate(s->value)); });
}

rician_status rician_fit_mle(const rician_sample* s, double tol, size_t max_iter,
                             rician_estimate* out) {
  RICIAN_REQUIRE(s && out);
  return guarded([&] {
    rician::MleOptions opt;
    if (tol > 0.0) opt.tol = tol;
    if (max_iter > 0) opt.max_iter = max_iter;
    *out = to_estimate(rician::mle_estimate(s->value, opt));
  });
}

rician_status rician_asymptotic_ci(const rician_estimate* est, const rician_sample* s,
                                   double level, rician_interval* eta,
                                   rician_interval* alpha) {
  RICIAN_REQUIRE(est && s && eta && alpha);
  return guarded([&] {
    rician::EstimateReport r;
    r.method = est->method == RICIAN_METHOD_MOMENTS ? rician::EstimateMethod::kMoments
                                                    : rician::EstimateMethod::kMaximumLikelihood;
    r.eta_hat = est->eta;
    r.alpha_hat = est->alpha;
    r.converged = est->converged != 0;
    r.flags = est->flags;
    const auto w = rician::asymptotic_ci(r, s->value, level);
    *eta = {w.eta.lo, w.eta.hi};
    *alpha = {w.alpha.lo, w.alpha.hi};
  });
}

rician_status rician_fisher(double eta, double alpha, size_t n, double out[4]) {
  RICIAN_REQUIRE(out);
  return guarded([&] {
    const auto m = rician::fisher_information(rician::RicianParams(eta, alpha), n);
    out[0] = m.entries[0][0];
    out[1] = m.entries[0][1];
    out[2] = m.entries[1][0];
    out[3] = m.entries[1][1];
  });
}

rician_status rician_prior_parse(const char* text, rician_prior* out) {
  RICIAN_REQUIRE(text && out);
  return guarded([&] { *out = from_spec(rician::PriorSpec::parse(text)); });
}

rician_status rician_check_propriety(const rician_prior* prior, size_t n, int distinct_data,
                                     rician_verdict* out) {
  RICIAN_REQUIRE(prior && out);
  return guarded([&] {
    const auto spec = to_spec(*prior);
    *out = to_verdict(rician::check_propriety(spec, n, distinct_data != 0), spec);
  });
}

rician_status rician_check_moments(const rician_prior* prior, size_t n, int distinct_data,
                                   rician_verdict* out) {
  RICIAN_REQUIRE(prior && out);
  return guarded([&] {
    const auto spec = to_spec(*prior);
    *out = to_verdict(rician::check_moment_finiteness(spec, n, distinct_data != 0), spec);
  });
}

const char* rician_verdict_status_name(int status) {
  if (status < 0 || status > 2) return "UNKNOWN";
  return rician::to_string(static_cast<rician::ProprietyStatus>(status));
}

const char* rician_verdict_rule_name(int rule) {
  if (rule < 0 || rule > 4) return "unknown";
  return rician::to_string(static_cast<rician::GoverningRule>(rule));
}

rician_status rician_log_posterior(const rician_prior* prior, double eta, double alpha,
                                   const rician_sample* s, double* out) {
  RICIAN_REQUIRE(prior && s && out);
  return guarded([&] {
    *out = rician::log_posterior(to_spec(*prior), rician::RicianParams(eta, alpha), s->value);
  });
}

void rician_mcmc_config_default(rician_mcmc_config* cfg) {
  if (cfg) *cfg = from_config(rician::McmcConfig{});
}

rician_status rician_run_chain(const rician_sample* s, const rician_mcmc_config* cfg,
                               rician_chain** out) {
  RICIAN_REQUIRE(s && cfg && out);
  return guarded([&] {
    *out = new rician_chain{rician::run_chain(s->value, to_config(*cfg))};
  });
}

void rician_chain_free(rician_chain* c) { delete c; }
size_t rician_chain_count(const rician_chain* c) { return c ? c->value.runs.size() : 0; }

size_t rician_chain_length(const rician_chain* c, size_t chain) {
  if (!c || chain >= c->value.runs.size()) return 0;
  return c->value.runs[chain].draws.size();
}

size_t rician_chain_draws(const rician_chain* c, size_t chain, double* eta, double* alpha,
                          size_t cap) {
  if (!c || chain >= c->value.runs.size()) return 0;
  const auto& d = c->value.runs[chain].draws;
  const size_t n = std::min(cap, d.size());
  for (size_t i = 0; i < n; ++i) {
    if (eta) eta[i] = d[i].eta;
    if (alpha) alpha[i] = d[i].alpha;
  }
  return n;
}

rician_status rician_chain_acceptance(const rician_chain* c, size_t chain, double* eta_rate,
                                      double* alpha_rate) {
  RICIAN_REQUIRE(c && chain < c->value.runs.size() && eta_rate && alpha_rate);
  *eta_rate = c->value.runs[chain].accept_rate_eta;
  *alpha_rate = c->value.runs[chain].accept_rate_alpha;
  return RICIAN_OK;
}

rician_status rician_chain_geweke(const rician_chain* c, size_t chain, double* z_eta,
                                  double* z_alpha) {
  RICIAN_REQUIRE(c && chain < c->value.runs.size() && z_eta && z_alpha);
  return guarded([&] {
    std::vector<double> e, a;
    for (const auto& d : c->value.runs[chain].draws) {
      e.push_back(d.eta);
      a.push_back(d.alpha);
    }
    *z_eta = rician::geweke_z(e);
    *z_alpha = rician::geweke_z(a);
  });
}

rician_status rician_chain_summarize(const rician_chain* c, double level,
                                     rician_param_summary* eta, rician_param_summary* alpha) {
  RICIAN_REQUIRE(c && eta && alpha);
  return guarded([&] {
    const auto s = rician::summarize(c->value, level);
    *eta = to_summary(s.eta);
    *alpha = to_summary(s.alpha);
  });
}

rician_status rician_chain_write_csv(const rician_chain* c, const char* path) {
  RICIAN_REQUIRE(c && path);
  return guarded([&] {
    write_to(path, [&](std::ostream& o) { rician::write_chain_csv(o, c->value); });
  });
}

rician_status rician_chain_read_csv(const char* path, rician_chain** out) {
  RICIAN_REQUIRE(path && out);
  return guarded([&] {
    if (std::string(path) == "-") {
      *out = new rician_chain{rician::read_chain_csv(std::cin)};
      return;
    }
    std::ifstream in(path);
    if (!in) throw rician::Error(std::string("cannot open '") + path + "'");
    *out = new rician_chain{rician::read_chain_csv(in)};
  });
}

rician_status rician_predictive_draw(const rician_chain* c, uint64_t seed,
                                     rician_predictive** out) {
  RICIAN_REQUIRE(c && out);
  return guarded([&] {
    *out = new rician_predictive{rician::draw_predictive(c->value, seed)};
  });
}

void rician_predictive_free(rician_predictive* p) { delete p; }
size_t rician_predictive_size(const rician_predictive* p) {
  return p ? p->value.values.size() : 0;
}

size_t rician_predictive_values(const rician_predictive* p, double* out, size_t cap) {
  if (!p || !out) return 0;
  const size_t n = std::min(cap, p->value.values.size());
  std::copy(p->value.values.begin(), p->value.values.begin() + static_cast<std::ptrdiff_t>(n),
            out);
  return n;
}

rician_status rician_predictive_summarize(const rician_predictive* p, double level,
                                          rician_param_summary* out) {
  RICIAN_REQUIRE(p && out);
  return guarded([&] {
    const auto s = rician::predictive_summary(p->value, level);
    *out = {s.mean, s.median, s.sd, s.lo, s.hi, s.mean};
  });
}

rician_status rician_predictive_write_csv(const rician_predictive* p, const char* path) {
  RICIAN_REQUIRE(p && path);
  return guarded([&] {
    write_to(path, [&](std::ostream& o) { rician::write_predictive_csv(o, p->value); });
  });
}

rician_status rician_outage_curve(const rician_chain* c, const double* grid, size_t n,
                                  double level, rician_outage_point* out,
                                  size_t* failed_draws) {
  RICIAN_REQUIRE(c && grid && out);
  return guarded([&] {
    const auto curve = rician::outage_curve(c->value, std::span<const double>(grid, n), level);
    for (size_t i = 0; i < n; ++i) {
      const auto& p = curve.points[i];
      out[i] = {p.gamma_th, p.point, p.lo, p.hi};
    }
    if (failed_draws) *failed_draws = curve.failed_draws;
  });
}

rician_status rician_outage_write_csv(const rician_outage_point* points, size_t n,
                                      const char* path) {
  RICIAN_REQUIRE(points && path);
  return guarded([&] {
    rician::OutageCurve curve;
    for (size_t i = 0; i < n; ++i)
      curve.points.push_back({points[i].gamma_th, points[i].point, points[i].lo, points[i].hi});
    write_to(path, [&](std::ostream& o) { rician::write_outage_csv(o, curve); });
  });
}

void rician_study_config_default(rician_study_config* cfg) {
  if (!cfg) return;
  static const size_t grid[] = {10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
  static const char* const methods[] = {"mm", "mle", "bayes_jeffreys"};
  const rician::StudyConfig d;
  *cfg = rician_study_config{};
  cfg->eta = d.truth.eta();
  cfg->alpha = d.truth.alpha();
  cfg->n_grid = grid;
  cfg->n_grid_len = sizeof grid / sizeof grid[0];
  cfg->replications = d.replications;
  cfg->methods = methods;
  cfg->methods_len = 3;
  cfg->level = d.level;
  cfg->seed = d.seed;
  cfg->mcmc = from_config(d.mcmc);
  cfg->threads = 0;
}

rician_status rician_run_study(const rician_study_config* cfg, rician_study** out) {
  RICIAN_REQUIRE(cfg && out && (cfg->n_grid || cfg->n_grid_len == 0) &&
                 (cfg->methods || cfg->methods_len == 0));
  return guarded([&] {
    rician::StudyConfig sc;
    sc.truth = rician::RicianParams(cfg->eta, cfg->alpha);
    sc.n_grid.assign(cfg->n_grid, cfg->n_grid + cfg->n_grid_len);
    sc.replications = cfg->replications;
    sc.methods.clear();
    for (size_t i = 0; i < cfg->methods_len; ++i) {
      if (!cfg->methods[i]) throw rician::DomainError("null method name");
      sc.methods.push_back(rician::StudyMethod::parse(cfg->methods[i]));
    }
    sc.level = cfg->level;
    sc.seed = cfg->seed;
    rician_mcmc_config mc = cfg->mcmc;
    mc.prior.family = RICIAN_PRIOR_JEFFREYS;
    sc.mcmc = to_config(mc);
    sc.threads = cfg->threads;
    auto study = std::make_unique<rician_study>();
    study->value = rician::run_study(sc);
    for (const auto& c : study->value.cells) study->names.push_back(c.method.name());
    *out = study.release();
  });
}

void rician_study_free(rician_study* s) { delete s; }
size_t rician_study_cell_count(const rician_study* s) { return s ? s->value.cells.size() : 0; }

rician_status rician_study_cell_at(const rician_study* s, size_t i, rician_study_cell* out) {
  RICIAN_REQUIRE(s && out && i < s->value.cells.size());
  const auto& c = s->value.cells[i];
  out->method = s->names[i].c_str();
  out->n = c.n;
  out->parameter = c.parameter == "eta" ? "eta" : "alpha";
  out->bias = c.bias;
  out->mse = c.mse;
  out->has_cp = c.cp ? 1 : 0;
  out->cp = c.cp ? *c.cp : std::nan("");
  out->failures = c.failures;
  out->used = c.used;
  return RICIAN_OK;
}

rician_status rician_study_write_csv(const rician_study* s, const char* path) {
  RICIAN_REQUIRE(s && path);
  return guarded([&] {
    write_to(path, [&](std::ostream& o) { rician::write_study_csv(o, s->value); });
  });
}

}  // extern "C"
