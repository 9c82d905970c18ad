#include "rician/estimators.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "rician/error.hpp"
#include "rician/special_functions.hpp"

namespace rician {

EstimateReport mm_from_moments(double m2, double m4) {
  EstimateReport r;
  r.method = EstimateMethod::kMoments;
  r.converged = true;
  const double disc = 2.0 * m2 * m2 - m4;
  if (disc < 0.0) {
    r.eta_hat = 0.0;
    r.alpha_hat = std::sqrt(m2 / 2.0);
    r.flags = kFlagMomentsUndefined | kFlagAtBoundary;
    return r;
  }
  r.eta_hat = std::sqrt(std::sqrt(disc));
  const double a2 = (m2 - r.eta_hat * r.eta_hat) / 2.0;
  if (a2 <= 0.0) {
    r.alpha_hat = 0.0;
    r.flags |= kFlagAtBoundary;
  } else {
    r.alpha_hat = std::sqrt(a2);
  }
  if (r.eta_hat == 0.0) r.flags |= kFlagAtBoundary;
  return r;
}

EstimateReport mm_estimate(const Sample& s) {
  if (s.all_equal()) {
    EstimateReport r;
    r.method = EstimateMethod::kMoments;
    r.converged = true;
    r.eta_hat = s.min();
    r.alpha_hat = 0.0;
    r.flags = kFlagAtBoundary;
    return r;
  }
  return mm_from_moments(s.m2(), s.m4());
}

double log_likelihood(const RicianParams& p, const Sample& s) {
  const double a2 = p.alpha() * p.alpha();
  const double ratio = p.eta() / a2;
  double acc = 0.0;
  for (double x : s.values()) {
    const double d = x - p.eta();
    acc += log_bessel_i0_scaled(ratio * x) - d * d / (2.0 * a2);
  }
  return acc + s.sum_logs() - static_cast<double>(s.size()) * std::log(a2);
}

namespace {

// mean(x_i R(x_i eta / alpha^2)) with alpha^2 tied to eta through
// 2 alpha^2 + eta^2 = m2.
double profile_map(double eta, const Sample& s) {
  if (eta == 0.0) return 0.0;
  const double a2 = (s.m2() - eta * eta) / 2.0;
  const double ratio = eta / a2;
  double acc = 0.0;
  for (double x : s.values()) acc += x * bessel_ratio(ratio * x);
  return acc / static_cast<double>(s.size());
}

struct FixedPoint {
  double eta = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
};

FixedPoint iterate(double start, const Sample& s, const MleOptions& opt) {
  const double eta_max = std::sqrt(s.m2()) * (1.0 - 1e-9);
  FixedPoint best;
  double eta = std::clamp(start, 0.0, eta_max);
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    const double next = profile_map(eta, s);
    const double residual = std::abs(next - eta);
    if (residual < best.residual) {
      best.eta = eta;
      best.residual = residual;
    }
    best.iterations = it;
    if (residual <= opt.tol) {
      best.eta = eta;
      best.residual = residual;
      best.converged = true;
      return best;
    }
    eta = std::min(next, eta_max);
  }
  return best;
}

double alpha_on_profile(double eta, const Sample& s) {
  return std::sqrt((s.m2() - eta * eta) / 2.0);
}

double profile_log_likelihood(double eta, const Sample& s) {
  return log_likelihood(RicianParams(eta, alpha_on_profile(eta, s)), s);
}

}  // namespace

double eta_score_residual(double eta, double alpha, const Sample& s) {
  const double ratio = eta / (alpha * alpha);
  double acc = 0.0;
  for (double x : s.values()) acc += x * bessel_ratio(ratio * x);
  return std::abs(eta - acc / static_cast<double>(s.size()));
}

EstimateReport mle_estimate(const Sample& s, const MleOptions& options) {
  if (s.size() < 2) throw DomainError("mle_estimate: need at least 2 observations");
  if (s.all_equal()) throw DomainError("mle_estimate: all observations are equal");
  if (!(options.tol > 0.0) || options.max_iter == 0)
    throw DomainError("mle_estimate: tol must be > 0 and max_iter >= 1");

  const EstimateReport mm = mm_estimate(s);
  const double eta_max = std::sqrt(s.m2()) * (1.0 - 1e-9);
  double start = mm.eta_hat;
  if (mm.has(kFlagMomentsUndefined) || mm.has(kFlagAtBoundary) || start <= 0.0 ||
      start >= eta_max)
    start = 0.5 * std::sqrt(s.m2());
  const double start_ll = profile_log_likelihood(std::min(start, eta_max), s);

  std::size_t total_iterations = 0;
  FixedPoint best = iterate(start, s, options);
  total_iterations += best.iterations;
  double best_ll = best.converged ? profile_log_likelihood(best.eta, s)
                                  : -std::numeric_limits<double>::infinity();

  const bool suspicious =
      !best.converged || best.eta == 0.0 || best_ll < start_ll;
  if (suspicious) {
    FixedPoint fallback = best;
    for (double factor : {0.5, 0.75, 1.25, 1.5, 2.0}) {
      const FixedPoint fp = iterate(start * factor, s, options);
      total_iterations += fp.iterations;
      if (!fp.converged) {
        if (!best.converged && fp.residual < fallback.residual) fallback = fp;
        continue;
      }
      const double ll = profile_log_likelihood(fp.eta, s);
      if (!best.converged || ll > best_ll) {
        best = fp;
        best_ll = ll;
      }
    }
    if (!best.converged) best = fallback;
  }

  EstimateReport r;
  r.method = EstimateMethod::kMaximumLikelihood;
  r.eta_hat = best.eta;
  r.alpha_hat = alpha_on_profile(best.eta, s);
  r.converged = best.converged;
  r.iterations = total_iterations;
  r.score_residual = best.residual;
  if (r.eta_hat == 0.0) r.flags |= kFlagAtBoundary;
  return r;
}

FisherMatrix fisher_information(const RicianParams& p, std::size_t n) {
  if (n == 0) throw DomainError("fisher_information: n must be >= 1");
  const double rho = p.rho();
  if (!(rho > 0.0)) throw DomainError("fisher_information: rho must be > 0");
  const double ps = psi(rho);
  const double a2 = p.alpha() * p.alpha();
  const double scale = static_cast<double>(n) / a2;
  FisherMatrix m;
  m.n = n;
  m.entries[0][0] = scale * 4.0 * (rho * ps - rho + 1.0);
  m.entries[0][1] = m.entries[1][0] = scale * 2.0 * std::sqrt(rho) * (1.0 - ps);
  m.entries[1][1] = scale * ps;
  return m;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must be in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

WaldIntervals asymptotic_ci(const EstimateReport& report, const Sample& s,
                            double level) {
  if (!report.converged) throw DomainError("asymptotic_ci: estimate did not converge");
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("asymptotic_ci: level must be in (0, 1)");
  if (!(report.eta_hat > 0.0 && report.alpha_hat > 0.0))
    throw SingularMatrixError("asymptotic_ci: information is singular at the boundary");
  const FisherMatrix info =
      fisher_information(RicianParams(report.eta_hat, report.alpha_hat), s.size());
  const double det = info.determinant();
  const double tr = info.trace();
  if (!(det > 1e-12 * tr * tr))
    throw SingularMatrixError("asymptotic_ci: Fisher information is ill-conditioned");
  const double var_alpha = info.entries[1][1] / det;
  const double var_eta = info.entries[0][0] / det;
  const double z = normal_quantile(0.5 * (1.0 + level));
  WaldIntervals w;
  const double he = z * std::sqrt(var_eta);
  const double ha = z * std::sqrt(var_alpha);
  w.eta = {report.eta_hat - he, report.eta_hat + he};
  w.alpha = {report.alpha_hat - ha, report.alpha_hat + ha};
  return w;
}

}  // namespace rician
