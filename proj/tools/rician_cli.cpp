// rician: command-line front end. Talks to the library only through the C
// interface in rician/rician.h.
//
// Exit codes: 0 success, 1 input error, 2 usage error, 3 prior refused by
// the propriety gate, 4 numerical failure.

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rician/rician.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitUsage = 2;
constexpr int kExitImproper = 3;
constexpr int kExitNumerical = 4;

constexpr const char* kReportVersion = "rician-report/1";

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(rician_status s) {
  switch (s) {
    case RICIAN_E_PARSE:
    case RICIAN_E_IO:
    case RICIAN_E_INVALID_ARGUMENT:
      return kExitInput;
    case RICIAN_E_IMPROPER:
      return kExitImproper;
    default:
      return kExitNumerical;
  }
}

void check(rician_status s, int code_override = 0) {
  if (s == RICIAN_OK) return;
  throw Failure{code_override ? code_override : exit_code_for(s), rician_last_error()};
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0' && end != epoch) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json envelope(const std::string& command, std::optional<std::uint64_t> seed, json payload,
              json diagnostics = nullptr) {
  json e;
  e["command"] = command;
  e["version"] = kReportVersion;
  e["library_version"] = rician_version();
  e["seed"] = seed ? json(*seed) : json(nullptr);
  e["timestamp"] = timestamp();
  e["payload"] = std::move(payload);
  e["diagnostics"] = std::move(diagnostics);
  return e;
}

void emit_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Failure{kExitInput, "cannot open '" + out_path + "' for writing"};
  f << text;
}

void emit_json(const std::string& out_path, const json& j) { emit_text(out_path, j.dump(2) + "\n"); }

// Randomized commands take --seed, falling back to RICIAN_SEED, then 0.
struct SeedOption {
  std::uint64_t value = 0;
  CLI::Option* opt = nullptr;

  void add(CLI::App* app) { opt = app->add_option("--seed", value, "Random seed (default: $RICIAN_SEED or 0)"); }

  std::uint64_t resolve() const {
    if (opt && opt->count() > 0) return value;
    if (const char* env = std::getenv("RICIAN_SEED")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && end != env) return v;
      throw Failure{kExitUsage, std::string("RICIAN_SEED is not an integer: ") + env};
    }
    return 0;
  }
};

rician_prior parse_prior(const std::string& text) {
  rician_prior p{};
  if (rician_prior_parse(text.c_str(), &p) != RICIAN_OK)
    throw Failure{kExitUsage, rician_last_error()};
  return p;
}

json verdict_json(const rician_verdict& v) {
  json j;
  j["status"] = rician_verdict_status_name(v.status);
  j["rule"] = rician_verdict_rule_name(v.rule);
  j["min_n"] = v.min_n >= 0 ? json(v.min_n) : json(nullptr);
  j["requires_distinct_data"] = v.requires_distinct_data != 0;
  j["boundary_case"] = v.boundary_case != 0;
  j["tails"] = {{"r0", v.r0}, {"r_inf", v.r_inf}, {"k", v.k}};
  return j;
}

json summary_json(const rician_param_summary& s, const char* point_rule) {
  return {{"mean", number(s.mean)}, {"median", number(s.median)}, {"sd", number(s.sd)},
          {"lo", number(s.lo)},     {"hi", number(s.hi)},         {"point", number(s.point)},
          {"point_rule", point_rule}};
}

json estimate_json(const rician_estimate& e) {
  json j;
  j["eta"] = number(e.eta);
  j["alpha"] = number(e.alpha);
  j["converged"] = e.converged != 0;
  if (e.method == RICIAN_METHOD_MLE) {
    j["iterations"] = e.iterations;
    j["score_residual"] = number(e.score_residual);
  }
  json flags = json::array();
  if (e.flags & RICIAN_FLAG_MOMENTS_UNDEFINED) flags.push_back("MM_UNDEFINED_FALLBACK");
  if (e.flags & RICIAN_FLAG_AT_BOUNDARY) flags.push_back("AT_BOUNDARY");
  j["flags"] = flags;
  return j;
}

struct Sample {
  rician_sample* h = nullptr;
  ~Sample() { rician_sample_free(h); }
};
struct Chain {
  rician_chain* h = nullptr;
  ~Chain() { rician_chain_free(h); }
};
struct Predictive {
  rician_predictive* h = nullptr;
  ~Predictive() { rician_predictive_free(h); }
};
struct Study {
  rician_study* h = nullptr;
  ~Study() { rician_study_free(h); }
};

void load(const std::string& path, Sample& s) {
  const rician_status st = rician_sample_load(path.c_str(), &s.h);
  if (st != RICIAN_OK) throw Failure{kExitInput, rician_last_error()};
}

json sample_json(const Sample& s) {
  const size_t n = rician_sample_size(s.h);
  std::vector<double> v(n);
  rician_sample_values(s.h, v.data(), n);
  double lo = v.front(), hi = v.front();
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {{"n", n}, {"min", lo}, {"max", hi}, {"all_equal", rician_sample_all_equal(s.h) != 0}};
}

struct McmcOptions {
  std::string prior = "jeffreys";
  rician_mcmc_config cfg{};
  bool allow_improper = false;

  McmcOptions() { rician_mcmc_config_default(&cfg); }

  void add(CLI::App* app) {
    app->add_option("--prior", prior, "jeffreys | power:EPS | tails:R0,RINF,K")->capture_default_str();
    app->add_option("--iterations", cfg.iterations, "MCMC sweeps per chain")->capture_default_str();
    app->add_option("--burn-in", cfg.burn_in, "Discarded initial sweeps")->capture_default_str();
    app->add_option("--thin", cfg.thin, "Keep every k-th sweep")->capture_default_str();
    app->add_option("--chains", cfg.chains, "Independent chains")->capture_default_str();
    app->add_option("--d-eta", cfg.d_eta, "Gamma proposal precision for eta")->capture_default_str();
    app->add_option("--d-alpha", cfg.d_alpha, "Gamma proposal precision for alpha")->capture_default_str();
    app->add_flag("--allow-improper", allow_improper, "Skip the propriety gate");
  }

  rician_mcmc_config resolve(std::uint64_t seed) const {
    rician_mcmc_config c = cfg;
    c.prior = parse_prior(prior);
    c.seed = seed;
    c.allow_improper = allow_improper ? 1 : 0;
    return c;
  }
};

json chain_diagnostics(const Chain& c) {
  json runs = json::array();
  for (size_t k = 0; k < rician_chain_count(c.h); ++k) {
    json r;
    r["chain"] = k;
    r["draws"] = rician_chain_length(c.h, k);
    double ae = 0, aa = 0;
    if (rician_chain_acceptance(c.h, k, &ae, &aa) == RICIAN_OK) {
      r["accept_rate_eta"] = ae;
      r["accept_rate_alpha"] = aa;
    }
    double ze = 0, za = 0;
    if (rician_chain_geweke(c.h, k, &ze, &za) == RICIAN_OK) {
      r["geweke_z_eta"] = ze;
      r["geweke_z_alpha"] = za;
    } else {
      r["geweke_error"] = rician_last_error();
    }
    runs.push_back(r);
  }
  return {{"chains", runs}};
}

// ---------------------------------------------------------------- fit ---

struct FitArgs {
  std::string input;
  std::string method = "all";
  McmcOptions mcmc;
  SeedOption seed;
  double level = 0.95;
  std::string out;
  std::string format = "json";
  std::string chain_out;
  std::string predictive_out;
};

int run_fit(const FitArgs& a) {
  Sample s;
  load(a.input, s);
  const bool want_mm = a.method == "mm" || a.method == "all";
  const bool want_mle = a.method == "mle" || a.method == "all";
  const bool want_bayes = a.method == "bayes" || a.method == "all";
  if (a.format == "csv" && !want_bayes)
    throw Failure{kExitUsage, "--format csv emits the posterior chain; use --method bayes"};

  json payload;
  payload["sample"] = sample_json(s);
  json estimates;
  json diagnostics = nullptr;
  std::optional<std::uint64_t> seed;

  if (want_mm) {
    rician_estimate e{};
    check(rician_fit_moments(s.h, &e), kExitNumerical);
    estimates["mm"] = estimate_json(e);
  }
  if (want_mle) {
    rician_estimate e{};
    const rician_status st = rician_fit_mle(s.h, 0.0, 0, &e);
    if (st == RICIAN_E_DOMAIN) {
      estimates["mle"] = {{"error", rician_last_error()}};
    } else {
      check(st, kExitNumerical);
      json j = estimate_json(e);
      rician_interval ie{}, ia{};
      if (e.converged && rician_asymptotic_ci(&e, s.h, a.level, &ie, &ia) == RICIAN_OK) {
        j["ci"] = {{"level", a.level},
                   {"eta", {number(ie.lo), number(ie.hi)}},
                   {"alpha", {number(ia.lo), number(ia.hi)}}};
      } else {
        j["ci"] = nullptr;
        j["ci_error"] = e.converged ? rician_last_error() : "estimate did not converge";
      }
      estimates["mle"] = j;
    }
  }
  Chain chain;
  if (want_bayes) {
    seed = a.seed.resolve();
    const rician_mcmc_config cfg = a.mcmc.resolve(*seed);
    const size_t n = rician_sample_size(s.h);
    const int distinct = rician_sample_all_equal(s.h) ? 0 : 1;
    rician_verdict v{};
    check(rician_check_propriety(&cfg.prior, n, distinct, &v), kExitUsage);
    json bayes;
    bayes["prior"] = a.mcmc.prior;
    bayes["propriety"] = verdict_json(v);
    if (v.status != RICIAN_PROPER && !cfg.allow_improper) {
      bayes["refused"] = true;
      estimates["bayes"] = bayes;
      payload["estimates"] = estimates;
      emit_json(a.format == "json" ? a.out : std::string(), envelope("fit", seed, payload));
      std::cerr << "rician: posterior under prior " << a.mcmc.prior << " is "
                << rician_verdict_status_name(v.status) << " for n = " << n
                << "; refusing to sample (use --allow-improper to override)\n";
      return kExitImproper;
    }
    check(rician_run_chain(s.h, &cfg, &chain.h));
    rician_param_summary se{}, sa{};
    check(rician_chain_summarize(chain.h, a.level, &se, &sa));
    bayes["config"] = {{"iterations", cfg.iterations}, {"burn_in", cfg.burn_in},
                       {"thin", cfg.thin},             {"chains", cfg.chains},
                       {"d_eta", cfg.d_eta},           {"d_alpha", cfg.d_alpha}};
    bayes["level"] = a.level;
    bayes["eta"] = summary_json(se, "median");
    bayes["alpha"] = summary_json(sa, "mean");
    Predictive pred;
    check(rician_predictive_draw(chain.h, *seed, &pred.h));
    rician_param_summary sp{};
    check(rician_predictive_summarize(pred.h, a.level, &sp));
    bayes["predictive"] = summary_json(sp, "mean");
    estimates["bayes"] = bayes;
    diagnostics = chain_diagnostics(chain);
    if (!a.chain_out.empty()) check(rician_chain_write_csv(chain.h, a.chain_out.c_str()), kExitInput);
    if (!a.predictive_out.empty())
      check(rician_predictive_write_csv(pred.h, a.predictive_out.c_str()), kExitInput);
  }
  payload["estimates"] = estimates;

  if (a.format == "csv") {
    check(rician_chain_write_csv(chain.h, a.out.empty() ? "-" : a.out.c_str()), kExitInput);
    return 0;
  }
  emit_json(a.out, envelope("fit", seed, payload, diagnostics));
  return 0;
}

// -------------------------------------------------------- check-prior ---

struct CheckArgs {
  std::string prior;
  size_t n = 0;
  bool all_equal = false;
  std::string out;
};

int run_check(const CheckArgs& a) {
  const rician_prior p = parse_prior(a.prior);
  rician_verdict v{}, m{};
  check(rician_check_propriety(&p, a.n, a.all_equal ? 0 : 1, &v), kExitUsage);
  check(rician_check_moments(&p, a.n, a.all_equal ? 0 : 1, &m), kExitUsage);
  json payload;
  payload["prior"] = a.prior;
  payload["n"] = a.n;
  payload["distinct_data"] = !a.all_equal;
  payload["propriety"] = verdict_json(v);
  payload["first_moments"] = verdict_json(m);
  emit_json(a.out, envelope("check-prior", std::nullopt, payload));
  return 0;
}

// ----------------------------------------------------------- simulate ---

struct SimulateArgs {
  std::string config;
  SeedOption seed;
  std::string out;
  std::string format = "json";
  size_t threads = 0;
};

int run_simulate(const SimulateArgs& a) {
  json cfgj;
  {
    std::ifstream f(a.config);
    if (!f) throw Failure{kExitInput, "cannot open '" + a.config + "'"};
    try {
      f >> cfgj;
    } catch (const json::exception& e) {
      throw Failure{kExitInput, a.config + ": " + e.what()};
    }
  }
  rician_study_config sc{};
  rician_study_config_default(&sc);
  std::vector<size_t> grid;
  std::vector<std::string> names;
  std::vector<const char*> name_ptrs;
  try {
    sc.eta = cfgj.value("eta", sc.eta);
    sc.alpha = cfgj.value("alpha", sc.alpha);
    if (cfgj.contains("n_grid")) {
      grid = cfgj["n_grid"].get<std::vector<size_t>>();
      sc.n_grid = grid.data();
      sc.n_grid_len = grid.size();
    }
    sc.replications = cfgj.value("replications", sc.replications);
    if (cfgj.contains("methods")) {
      names = cfgj["methods"].get<std::vector<std::string>>();
      for (const auto& n : names) name_ptrs.push_back(n.c_str());
      sc.methods = name_ptrs.data();
      sc.methods_len = name_ptrs.size();
    }
    sc.level = cfgj.value("level", sc.level);
    sc.seed = cfgj.value("seed", sc.seed);
    if (cfgj.contains("mcmc")) {
      const json& m = cfgj["mcmc"];
      sc.mcmc.iterations = m.value("iterations", sc.mcmc.iterations);
      sc.mcmc.burn_in = m.value("burn_in", sc.mcmc.burn_in);
      sc.mcmc.thin = m.value("thin", sc.mcmc.thin);
      sc.mcmc.d_eta = m.value("d_eta", sc.mcmc.d_eta);
      sc.mcmc.d_alpha = m.value("d_alpha", sc.mcmc.d_alpha);
    }
    sc.threads = cfgj.value("threads", sc.threads);
  } catch (const json::exception& e) {
    throw Failure{kExitInput, a.config + ": " + e.what()};
  }
  if (a.seed.opt->count() > 0 || std::getenv("RICIAN_SEED")) sc.seed = a.seed.resolve();
  if (a.threads > 0) sc.threads = a.threads;

  Study study;
  const rician_status st = rician_run_study(&sc, &study.h);
  if (st == RICIAN_E_DOMAIN || st == RICIAN_E_INVALID_ARGUMENT)
    throw Failure{kExitInput, rician_last_error()};
  check(st);
  if (a.format == "csv") {
    check(rician_study_write_csv(study.h, a.out.empty() ? "-" : a.out.c_str()), kExitInput);
    return 0;
  }
  json cells = json::array();
  for (size_t i = 0; i < rician_study_cell_count(study.h); ++i) {
    rician_study_cell c{};
    rician_study_cell_at(study.h, i, &c);
    cells.push_back({{"method", c.method},
                     {"n", c.n},
                     {"parameter", c.parameter},
                     {"bias", number(c.bias)},
                     {"mse", number(c.mse)},
                     {"cp", c.has_cp ? number(c.cp) : json(nullptr)},
                     {"failures", c.failures},
                     {"used", c.used}});
  }
  json payload;
  payload["config"] = {{"eta", sc.eta},
                       {"alpha", sc.alpha},
                       {"n_grid", std::vector<size_t>(sc.n_grid, sc.n_grid + sc.n_grid_len)},
                       {"replications", sc.replications},
                       {"level", sc.level}};
  payload["cells"] = cells;
  emit_json(a.out, envelope("simulate", sc.seed, payload));
  return 0;
}

// ------------------------------------------------------------ predict ---

struct PredictArgs {
  std::string chain;
  SeedOption seed;
  double level = 0.95;
  std::string out;
  std::string format = "json";
};

int run_predict(const PredictArgs& a) {
  Chain c;
  check(rician_chain_read_csv(a.chain.c_str(), &c.h), kExitInput);
  const std::uint64_t seed = a.seed.resolve();
  Predictive p;
  check(rician_predictive_draw(c.h, seed, &p.h));
  if (a.format == "csv") {
    check(rician_predictive_write_csv(p.h, a.out.empty() ? "-" : a.out.c_str()), kExitInput);
    return 0;
  }
  rician_param_summary s{};
  check(rician_predictive_summarize(p.h, a.level, &s));
  json payload;
  payload["draws"] = rician_predictive_size(p.h);
  payload["level"] = a.level;
  payload["y_new"] = summary_json(s, "mean");
  emit_json(a.out, envelope("predict", seed, payload));
  return 0;
}

// ------------------------------------------------------------- outage ---

struct OutageArgs {
  std::string chain;
  std::string input;
  McmcOptions mcmc;
  SeedOption seed;
  std::string grid = "0:15:61";
  std::vector<double> thresholds;
  double level = 0.95;
  std::string out;
  std::string format = "csv";
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{kExitUsage, "--grid expects START:STOP:COUNT, got '" + text + "'"};
    }
  }
  if (parts.size() != 3 || parts[2] < 2 || parts[2] != std::floor(parts[2]) || !(parts[1] > parts[0]))
    throw Failure{kExitUsage, "--grid expects START:STOP:COUNT with COUNT >= 2, got '" + text + "'"};
  const auto count = static_cast<size_t>(parts[2]);
  std::vector<double> g(count);
  for (size_t i = 0; i < count; ++i)
    g[i] = parts[0] + (parts[1] - parts[0]) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

int run_outage(const OutageArgs& a) {
  if (a.chain.empty() == a.input.empty())
    throw Failure{kExitUsage, "outage needs exactly one of --chain or --input"};
  const std::vector<double> grid = a.thresholds.empty() ? parse_grid(a.grid) : a.thresholds;
  Chain c;
  std::optional<std::uint64_t> seed;
  if (!a.chain.empty()) {
    check(rician_chain_read_csv(a.chain.c_str(), &c.h), kExitInput);
  } else {
    Sample s;
    load(a.input, s);
    seed = a.seed.resolve();
    const rician_mcmc_config cfg = a.mcmc.resolve(*seed);
    rician_verdict v{};
    check(rician_check_propriety(&cfg.prior, rician_sample_size(s.h),
                                 rician_sample_all_equal(s.h) ? 0 : 1, &v),
          kExitUsage);
    if (v.status != RICIAN_PROPER && !cfg.allow_improper) {
      std::cerr << "rician: posterior is " << rician_verdict_status_name(v.status)
                << "; refusing to sample\n";
      return kExitImproper;
    }
    check(rician_run_chain(s.h, &cfg, &c.h));
  }
  std::vector<rician_outage_point> pts(grid.size());
  size_t failed = 0;
  const rician_status st =
      rician_outage_curve(c.h, grid.data(), grid.size(), a.level, pts.data(), &failed);
  if (st == RICIAN_E_DOMAIN) throw Failure{kExitUsage, rician_last_error()};
  check(st);
  if (a.format == "csv") {
    check(rician_outage_write_csv(pts.data(), pts.size(), a.out.empty() ? "-" : a.out.c_str()),
          kExitInput);
    return 0;
  }
  json rows = json::array();
  for (const auto& p : pts)
    rows.push_back({{"gamma_th", p.gamma_th}, {"point", number(p.point)},
                    {"lo", number(p.lo)}, {"hi", number(p.hi)}});
  json payload{{"level", a.level}, {"failed_draws", failed}, {"curve", rows}};
  emit_json(a.out, envelope("outage", seed, payload));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Objective Bayesian and classical inference for the Rician distribution"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rician_version()));

  const auto formats = CLI::IsMember({"json", "csv"});

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate (eta, alpha) from a sample");
  fit_cmd->add_option("input,--input,-i", fit.input, "Sample file, one value per line ('-' for stdin)")->required();
  fit_cmd->add_option("--method,-m", fit.method, "mm | mle | bayes | all")
      ->check(CLI::IsMember({"mm", "mle", "bayes", "all"}))
      ->capture_default_str();
  fit.mcmc.add(fit_cmd);
  fit.seed.add(fit_cmd);
  fit_cmd->add_option("--level", fit.level, "Interval level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  fit_cmd->add_option("--out,-o", fit.out, "Output file (default stdout)");
  fit_cmd->add_option("--format", fit.format, "json report or csv chain")->check(formats)->capture_default_str();
  fit_cmd->add_option("--chain-out", fit.chain_out, "Also write the chain CSV here");
  fit_cmd->add_option("--predictive-out", fit.predictive_out, "Also write predictive draws here");

  CheckArgs chk;
  auto* chk_cmd = app.add_subcommand("check-prior", "Decide posterior propriety for a prior and n");
  chk_cmd->add_option("--prior", chk.prior, "jeffreys | power:EPS | tails:R0,RINF,K")->required();
  chk_cmd->add_option("--n,-n", chk.n, "Sample size")->required();
  chk_cmd->add_flag("--all-equal", chk.all_equal, "All observations are equal");
  chk_cmd->add_option("--out,-o", chk.out, "Output file (default stdout)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a bias/MSE/coverage study from a JSON config");
  sim_cmd->add_option("--config,-c", sim.config, "Study configuration (JSON)")->required();
  sim.seed.add(sim_cmd);
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0: all cores)");
  sim_cmd->add_option("--out,-o", sim.out, "Output file (default stdout)");
  sim_cmd->add_option("--format", sim.format, "json or csv")->check(formats)->capture_default_str();

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Posterior predictive draws from a saved chain");
  pred_cmd->add_option("--chain", pred.chain, "Chain CSV written by fit")->required();
  pred.seed.add(pred_cmd);
  pred_cmd->add_option("--level", pred.level, "Interval level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  pred_cmd->add_option("--out,-o", pred.out, "Output file (default stdout)");
  pred_cmd->add_option("--format", pred.format, "json summary or csv draws")->check(formats)->capture_default_str();

  OutageArgs outage;
  auto* out_cmd = app.add_subcommand("outage", "Outage probability curve with a credible band");
  out_cmd->add_option("--chain", outage.chain, "Chain CSV written by fit");
  out_cmd->add_option("--input,-i", outage.input, "Sample file; a chain is run first");
  outage.mcmc.add(out_cmd);
  outage.seed.add(out_cmd);
  out_cmd->add_option("--grid", outage.grid, "START:STOP:COUNT thresholds")->capture_default_str();
  out_cmd->add_option("--thresholds", outage.thresholds, "Explicit thresholds")->delimiter(',');
  out_cmd->add_option("--level", outage.level, "Band level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  out_cmd->add_option("--out,-o", outage.out, "Output file (default stdout)");
  out_cmd->add_option("--format", outage.format, "csv or json")->check(formats)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit);
    if (chk_cmd->parsed()) return run_check(chk);
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (pred_cmd->parsed()) return run_predict(pred);
    if (out_cmd->parsed()) return run_outage(outage);
  } catch (const Failure& f) {
    std::cerr << "rician: " << f.message << '\n';
    return f.code;
  }
  return kExitUsage;
}
