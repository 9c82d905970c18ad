#ifndef RICIAN_ESTIMATORS_HPP
#define RICIAN_ESTIMATORS_HPP

#include <array>
#include <cstddef>
#include <cstdint>

#include "rician/model.hpp"

namespace rician {

enum class EstimateMethod { kMoments, kMaximumLikelihood };

enum EstimateFlag : std::uint32_t {
  kFlagNone = 0,
  // 2 m2^2 - m4 < 0: moment estimator undefined, eta set to 0.
  kFlagMomentsUndefined = 1u << 0,
  // Estimate sits on the boundary eta = 0 or alpha = 0.
  kFlagAtBoundary = 1u << 1,
};

struct EstimateReport {
  EstimateMethod method = EstimateMethod::kMoments;
  double eta_hat = 0.0;
  double alpha_hat = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double score_residual = 0.0;  // maximum likelihood only
  std::uint32_t flags = kFlagNone;

  bool has(EstimateFlag f) const { return (flags & f) != 0; }
};

/// Closed-form estimator from the empirical second and fourth moments.
EstimateReport mm_estimate(const Sample& s);

/// The same inversion applied to given raw moments m2 = E X^2, m4 = E X^4.
EstimateReport mm_from_moments(double m2, double m4);

/// Sum of log densities, computed in log space.
double log_likelihood(const RicianParams& p, const Sample& s);

struct MleOptions {
  double tol = 1e-10;
  std::size_t max_iter = 500;
};

/// Profile fixed point eta <- mean(x_i R(x_i eta / alpha^2(eta))) with
/// alpha^2(eta) = (m2 - eta^2) / 2, started at the moment estimate, with
/// perturbed restarts when the iteration stalls. Throws DomainError for
/// n < 2 or all-equal data; non-convergence is reported, not thrown.
EstimateReport mle_estimate(const Sample& s, const MleOptions& options = {});

/// |eta - mean(x_i R(x_i eta / alpha^2))| at the given point.
double eta_score_residual(double eta, double alpha, const Sample& s);

/// Expected information, ordered (alpha, eta), for n observations.
struct FisherMatrix {
  std::array<std::array<double, 2>, 2> entries{};
  std::size_t n = 0;

  double determinant() const {
    return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
  }
  double trace() const { return entries[0][0] + entries[1][1]; }
};

/// Requires rho > 0 and n >= 1.
FisherMatrix fisher_information(const RicianParams& p, std::size_t n);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
};

struct WaldIntervals {
  Interval eta;
  Interval alpha;
};

/// Wald intervals from the inverse expected information at the estimate.
/// Throws DomainError unless report.converged and 0 < level < 1, and
/// SingularMatrixError if the information fails the conditioning check.
WaldIntervals asymptotic_ci(const EstimateReport& report, const Sample& s,
                            double level);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace rician

#endif
