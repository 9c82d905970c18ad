#include "rician/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "rician/error.hpp"
#include "rician/estimators.hpp"
#include "rician/rng.hpp"

namespace rician {

void McmcConfig::validate() const {
  if (!(iterations > burn_in)) throw DomainError("mcmc: iterations must exceed burn_in");
  if (thin == 0) throw DomainError("mcmc: thin must be >= 1");
  if (chains == 0) throw DomainError("mcmc: chains must be >= 1");
  if (!(d_eta > 0.0) || !(d_alpha > 0.0) || !std::isfinite(d_eta) || !std::isfinite(d_alpha))
    throw DomainError("mcmc: proposal precisions must be finite and > 0");
}

std::size_t Chain::total_draws() const {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.draws.size();
  return n;
}

std::vector<double> Chain::eta() const {
  std::vector<double> out;
  out.reserve(total_draws());
  for (const auto& r : runs)
    for (const auto& d : r.draws) out.push_back(d.eta);
  return out;
}

std::vector<double> Chain::alpha() const {
  std::vector<double> out;
  out.reserve(total_draws());
  for (const auto& r : runs)
    for (const auto& d : r.draws) out.push_back(d.alpha);
  return out;
}

double gamma_log_hastings(double current, double proposed, double d) {
  // q(y | x) = Gamma(y; shape d, rate d / x). The normalizers cancel.
  return (2.0 * d - 1.0) * (std::log(current) - std::log(proposed)) +
         d * (proposed / current - current / proposed);
}

namespace {

// One Metropolis-Hastings update of a positive scalar. The uniform is
// always consumed so the stream stays aligned whatever the outcome.
template <class Eval>
bool mh_step(double& x, double& lp, double d, Engine& engine, Eval&& eval) {
  std::gamma_distribution<double> proposal(d, x / d);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double y = proposal(engine);
  const double log_u = std::log(uniform(engine));
  if (!(y > 0.0) || !std::isfinite(y)) return false;
  const double lp_y = eval(y);
  const double log_ratio = (lp_y - lp) + gamma_log_hastings(x, y, d);
  if (log_u <= log_ratio) {
    x = y;
    lp = lp_y;
    return true;
  }
  return false;
}

}  // namespace

ChainRun run_metropolis(const LogDensity& target, double init_eta, double init_alpha,
                        const McmcConfig& cfg, std::size_t chain_index) {
  cfg.validate();
  if (!(init_eta > 0.0) || !(init_alpha > 0.0))
    throw DomainError("mcmc: initial state must be positive");
  Engine engine = make_engine(cfg.seed, StreamPurpose::kMcmcChain, chain_index);

  ChainRun run;
  run.init_eta = init_eta;
  run.init_alpha = init_alpha;
  run.draws.reserve(cfg.draws_per_chain());
  double eta = init_eta, alpha = init_alpha;
  double lp = target(eta, alpha);
  if (!std::isfinite(lp))
    throw ConvergenceError("mcmc: log density is not finite at the initial state");

  std::size_t acc_eta = 0, acc_alpha = 0;
  for (std::size_t j = 1; j <= cfg.iterations; ++j) {
    if (mh_step(eta, lp, cfg.d_eta, engine, [&](double y) { return target(y, alpha); }))
      ++acc_eta;
    if (mh_step(alpha, lp, cfg.d_alpha, engine, [&](double y) { return target(eta, y); }))
      ++acc_alpha;
    if (!(eta > 0.0 && alpha > 0.0))
      throw ConvergenceError("mcmc: state left the positive orthant");
    if (j > cfg.burn_in && (j - cfg.burn_in) % cfg.thin == 0)
      run.draws.push_back({j, eta, alpha});
  }
  const double iters = static_cast<double>(cfg.iterations);
  run.accept_rate_eta = static_cast<double>(acc_eta) / iters;
  run.accept_rate_alpha = static_cast<double>(acc_alpha) / iters;
  return run;
}

Draw initial_state(const Sample& s) {
  const EstimateReport mm = mm_estimate(s);
  if (!mm.has(kFlagMomentsUndefined) && mm.eta_hat > 0.0 && mm.alpha_hat > 0.0)
    return {0, mm.eta_hat, mm.alpha_hat};
  std::vector<double> v(s.values().begin(), s.values().end());
  std::sort(v.begin(), v.end());
  const double med = quantile_sorted(v, 0.5);
  const double a2 = s.m2() / 2.0 - med * med / 2.0;
  const double floor_alpha = 1e-3 * std::sqrt(s.m2());
  return {0, med, a2 > floor_alpha * floor_alpha ? std::sqrt(a2) : floor_alpha};
}

Chain run_chain(const Sample& s, const McmcConfig& cfg) {
  cfg.validate();
  if (!cfg.allow_improper) {
    const ProprietyVerdict v = check_propriety(cfg.prior, s.size(), !s.all_equal());
    if (v.status != ProprietyStatus::kProper)
      throw ProprietyError(std::string("posterior is ") + to_string(v.status) +
                           " under prior " + cfg.prior.describe() + " with n = " +
                           std::to_string(s.size()));
  }
  const Draw init = initial_state(s);
  const PriorSpec prior = cfg.prior;
  LogDensity target = [&s, prior](double eta, double alpha) {
    return log_posterior(prior, RicianParams(eta, alpha), s);
  };

  Chain chain;
  chain.config = cfg;
  chain.runs.resize(cfg.chains);
  if (cfg.chains == 1) {
    chain.runs[0] = run_metropolis(target, init.eta, init.alpha, cfg, 0);
    return chain;
  }
  std::vector<std::future<ChainRun>> jobs;
  for (std::size_t c = 0; c < cfg.chains; ++c)
    jobs.push_back(std::async(std::launch::async, run_metropolis, std::cref(target),
                              init.eta, init.alpha, std::cref(cfg), c));
  for (std::size_t c = 0; c < cfg.chains; ++c) chain.runs[c] = jobs[c].get();
  return chain;
}

namespace {

double mean_of(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m += v;
  return m / static_cast<double>(x.size());
}

// Spectral density at frequency zero, Bartlett lag window.
double spectral_zero(std::span<const double> x) {
  const std::size_t n = x.size();
  const double m = mean_of(x);
  const auto lags = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  auto autocov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < n; ++i) acc += (x[i] - m) * (x[i - lag] - m);
    return acc / static_cast<double>(n);
  };
  double s = autocov(0);
  for (std::size_t l = 1; l <= lags && l < n; ++l)
    s += 2.0 * (1.0 - static_cast<double>(l) / static_cast<double>(lags + 1)) * autocov(l);
  return s;
}

}  // namespace

double geweke_z(std::span<const double> series, double frac_first, double frac_last) {
  if (series.size() < 100) throw DomainError("geweke_z: need at least 100 values");
  if (!(frac_first > 0.0 && frac_first < 1.0 && frac_last > 0.0 && frac_last < 1.0 &&
        frac_first + frac_last <= 1.0))
    throw DomainError("geweke_z: fractions must lie in (0, 1) and sum to <= 1");
  const std::size_t n = series.size();
  const auto n1 = static_cast<std::size_t>(std::floor(frac_first * static_cast<double>(n)));
  const auto n2 = static_cast<std::size_t>(std::floor(frac_last * static_cast<double>(n)));
  const auto first = series.subspan(0, n1);
  const auto last = series.subspan(n - n2, n2);
  const double s1 = spectral_zero(first);
  const double s2 = spectral_zero(last);
  if (!(s1 > 0.0) || !(s2 > 0.0))
    throw ConvergenceError("geweke_z: a segment has zero variance");
  return (mean_of(first) - mean_of(last)) /
         std::sqrt(s1 / static_cast<double>(n1) + s2 / static_cast<double>(n2));
}

std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (max_lag >= n) throw DomainError("autocorrelation: max_lag must be < length");
  const double m = mean_of(series);
  double c0 = 0.0;
  for (double v : series) c0 += (v - m) * (v - m);
  if (!(c0 > 0.0)) throw DomainError("autocorrelation: series is constant");
  std::vector<double> out(max_lag + 1);
  out[0] = 1.0;
  for (std::size_t l = 1; l <= max_lag; ++l) {
    double acc = 0.0;
    for (std::size_t i = l; i < n; ++i) acc += (series[i] - m) * (series[i - l] - m);
    out[l] = acc / c0;
  }
  return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile: no values");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p must be in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double w = h - static_cast<double>(lo);
  if (w == 0.0) return sorted[lo];
  return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> values, double p) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, p);
}

ParamSummary summarize_values(std::span<const double> values, double level) {
  if (values.empty()) throw DomainError("summarize: no draws");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("summarize: level must be in (0, 1)");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  ParamSummary s;
  if (v.front() == v.back()) {
    s.mean = s.median = s.lo = s.hi = s.point = v.front();
    return s;
  }
  s.mean = mean_of(values);
  double ss = 0.0;
  for (double x : values) ss += (x - s.mean) * (x - s.mean);
  s.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  s.median = quantile_sorted(v, 0.5);
  const double tail = 0.5 * (1.0 - level);
  s.lo = quantile_sorted(v, tail);
  s.hi = quantile_sorted(v, 1.0 - tail);
  s.point = s.mean;
  return s;
}

PosteriorSummary summarize(const Chain& c, double level) {
  if (c.total_draws() == 0) throw DomainError("summarize: chain has no draws");
  PosteriorSummary out;
  out.level = level;
  out.eta = summarize_values(c.eta(), level);
  out.eta.point = out.eta.median;
  out.alpha = summarize_values(c.alpha(), level);
  out.alpha.point = out.alpha.mean;
  return out;
}

}  // namespace rician
