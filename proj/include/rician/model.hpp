#ifndef RICIAN_MODEL_HPP
#define RICIAN_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rician/rng.hpp"

namespace rician {

/// Noncentrality eta >= 0 and scale alpha > 0. eta = 0 is the Rayleigh law.
class RicianParams {
 public:
  /// Throws DomainError on non-finite values, alpha <= 0 or eta < 0.
  RicianParams(double eta, double alpha);

  double eta() const { return eta_; }
  double alpha() const { return alpha_; }
  /// Squared signal-to-noise ratio eta^2 / alpha^2.
  double rho() const { return (eta_ * eta_) / (alpha_ * alpha_); }

  friend bool operator==(const RicianParams&, const RicianParams&) = default;

 private:
  double eta_;
  double alpha_;
};

/// Strictly positive observations with cached power sums.
class Sample {
 public:
  /// Throws DomainError if empty or if any value is non-finite or <= 0.
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double sum() const { return sum1_; }
  double sum_squares() const { return sum2_; }
  double sum_fourth() const { return sum4_; }
  double sum_logs() const { return sum_log_; }
  /// Empirical raw moments (1/n) sum x^k for k = 2, 4.
  double m2() const { return sum2_ / static_cast<double>(size()); }
  double m4() const { return sum4_ / static_cast<double>(size()); }
  bool all_equal() const { return all_equal_; }
  double min() const { return min_; }
  double max() const { return max_; }

  friend bool operator==(const Sample& a, const Sample& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  double sum1_ = 0.0, sum2_ = 0.0, sum4_ = 0.0, sum_log_ = 0.0;
  double min_ = 0.0, max_ = 0.0;
  bool all_equal_ = false;
};

/// Density of the Rician law, evaluated as exp(log_pdf).
/// Throws DomainError unless x > 0 and finite.
double pdf(double x, const RicianParams& p);

/// Log density; overflow-free for any eta x / alpha^2.
double log_pdf(double x, const RicianParams& p);

/// n draws of sqrt((eta + alpha Z1)^2 + (alpha Z2)^2), Z standard normal.
/// Deterministic for a fixed seed.
Sample sample(const RicianParams& p, std::size_t n, std::uint64_t seed);

/// One draw using the caller's engine; shared by the predictive sampler.
double draw(const RicianParams& p, Engine& engine);

/// E[X^order] for order 2 or 4. Throws DomainError otherwise.
double raw_moment(const RicianParams& p, int order);

/// P(X <= x_th): quadrature of the density on (0, x_th] with absolute
/// error <= 1e-8. Throws DomainError for negative or non-finite x_th and
/// ConvergenceError if the tolerance cannot be certified.
double cdf(double x_th, const RicianParams& p);

/// cdf at each of the nondecreasing thresholds, accumulated panel by panel
/// so the returned curve is nondecreasing exactly.
std::vector<double> cdf_curve(std::span<const double> thresholds,
                              const RicianParams& p);

}  // namespace rician

#endif
