#ifndef RICIAN_MCMC_HPP
#define RICIAN_MCMC_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rician/model.hpp"
#include "rician/objective_bayes.hpp"

namespace rician {

struct McmcConfig {
  std::size_t iterations = 50500;
  std::size_t burn_in = 500;
  std::size_t thin = 5;
  std::size_t chains = 2;
  // Gamma proposal precisions: shape d, rate d / current, so the proposal
  // mean is the current value and its variance current^2 / d.
  double d_eta = 100.0;
  double d_alpha = 100.0;
  std::uint64_t seed = 0;
  PriorSpec prior = PriorSpec::jeffreys();
  // Skip the propriety gate.
  bool allow_improper = false;

  /// Throws DomainError on inconsistent settings.
  void validate() const;
  std::size_t draws_per_chain() const { return (iterations - burn_in) / thin; }
};

struct Draw {
  std::size_t iteration = 0;  // 1-based sweep index
  double eta = 0.0;
  double alpha = 0.0;
};

struct ChainRun {
  std::vector<Draw> draws;
  double accept_rate_eta = 0.0;
  double accept_rate_alpha = 0.0;
  double init_eta = 0.0;
  double init_alpha = 0.0;
};

struct Chain {
  McmcConfig config;
  std::vector<ChainRun> runs;

  std::size_t total_draws() const;
  /// Draws pooled in chain order.
  std::vector<double> eta() const;
  std::vector<double> alpha() const;
};

/// Joint log density of (eta, alpha), up to a constant.
using LogDensity = std::function<double(double eta, double alpha)>;

/// log q(current | proposed) - log q(proposed | current) for the Gamma
/// proposal of precision d; exactly 0 when proposed == current.
double gamma_log_hastings(double current, double proposed, double d);

/// Alternating single-site Metropolis-Hastings on `target` from `init`,
/// using stream (cfg.seed, chain_index). Ignores cfg.chains and the prior.
ChainRun run_metropolis(const LogDensity& target, double init_eta, double init_alpha,
                        const McmcConfig& cfg, std::size_t chain_index);

/// Posterior sampler for the Rician model under cfg.prior. Throws
/// ProprietyError unless the propriety check is PROPER (or allow_improper),
/// before any sampling. Chains run concurrently with independent streams.
Chain run_chain(const Sample& s, const McmcConfig& cfg);

/// Starting point: moment estimate, or (median, sqrt(m2/2 - median^2/2))
/// when the moment estimate is undefined.
Draw initial_state(const Sample& s);

/// Geweke convergence z-score: early-vs-late mean difference over spectral
/// standard errors (Bartlett window, M = floor(sqrt(segment length))).
/// Throws DomainError for short series or bad fractions, and
/// ConvergenceError if a segment has zero variance.
double geweke_z(std::span<const double> series, double frac_first = 0.1,
                double frac_last = 0.5);

/// Biased sample autocorrelations for lags 0..max_lag.
std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag);

/// Linear interpolation between order statistics (h = (n - 1) p).
double quantile(std::span<const double> values, double p);
/// Same, for data already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

struct ParamSummary {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double point = 0.0;  // the estimate reported for this parameter
};

/// mean, median, sd (n - 1 divisor) and equal-tailed interval of values.
ParamSummary summarize_values(std::span<const double> values, double level);

struct PosteriorSummary {
  double level = 0.95;
  ParamSummary eta;    // point = median
  ParamSummary alpha;  // point = mean
};

PosteriorSummary summarize(const Chain& c, double level);

}  // namespace rician

#endif
