#ifndef RICIAN_STUDY_HPP
#define RICIAN_STUDY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rician/mcmc.hpp"
#include "rician/model.hpp"

namespace rician {

enum class StudyMethodKind { kMoments, kMaximumLikelihood, kBayesJeffreys, kBayesPower };

struct StudyMethod {
  StudyMethodKind kind = StudyMethodKind::kMoments;
  double epsilon = 0.0;  // power prior only

  std::string name() const;
  /// "mm", "mle", "bayes_jeffreys" or "bayes_power:EPS".
  static StudyMethod parse(const std::string& text);
};

struct StudyConfig {
  RicianParams truth{6.0, 2.0};
  std::vector<std::size_t> n_grid{10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
  std::size_t replications = 1000;
  std::vector<StudyMethod> methods{{StudyMethodKind::kMoments},
                                   {StudyMethodKind::kMaximumLikelihood},
                                   {StudyMethodKind::kBayesJeffreys}};
  double level = 0.95;
  std::uint64_t seed = 0;
  // Template for the per-replicate chains; seed and prior are replaced.
  McmcConfig mcmc = short_chain_defaults();
  std::size_t threads = 0;  // 0: hardware concurrency

  static McmcConfig short_chain_defaults();
  /// Throws DomainError on bad settings, including a Bayes method whose
  /// posterior is not guaranteed proper at some n in the grid.
  void validate() const;
};

struct StudyCell {
  StudyMethod method;
  std::size_t n = 0;
  std::string parameter;  // "eta" or "alpha"
  double bias = 0.0;
  double mse = 0.0;
  std::optional<double> cp;  // no interval for the moment estimator
  std::size_t failures = 0;  // flagged, non-converged or failed replicates
  std::size_t used = 0;      // replicates entering bias and mse
  // Per-replicate estimates behind bias and mse, in replicate order.
  std::vector<double> estimates;
};

struct StudyTable {
  std::vector<StudyCell> cells;
  /// Throws DomainError if absent.
  const StudyCell& find(StudyMethodKind kind, std::size_t n, const std::string& parameter) const;
};

struct BiasMse {
  double bias = 0.0;
  double mse = 0.0;
};

/// mean(e - truth) and mean((e - truth)^2); NaN for no estimates.
BiasMse bias_mse(std::span<const double> estimates, double truth);

/// Replicates run concurrently; sample (n, i) uses a stream derived from
/// (seed, n, i), and the reduction runs in replicate order, so the table
/// does not depend on the thread count.
StudyTable run_study(const StudyConfig& cfg);

struct OutagePoint {
  double gamma_th = 0.0;
  double point = 0.0;  // cdf at (posterior median eta, posterior mean alpha)
  double lo = 0.0;     // equal-tailed band over per-draw cdf values
  double hi = 0.0;
};

struct OutageCurve {
  double level = 0.95;
  std::vector<OutagePoint> points;
  std::size_t failed_draws = 0;  // draws whose cdf could not be certified
};

/// Throws DomainError for an empty chain or a grid that is empty,
/// negative or decreasing.
OutageCurve outage_curve(const Chain& c, std::span<const double> gamma_grid, double level,
                         std::size_t threads = 0);

}  // namespace rician

#endif
