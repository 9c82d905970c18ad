#include "rician/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rician/error.hpp"
#include "rician/quadrature.hpp"
#include "rician/special_functions.hpp"

namespace rician {

RicianParams::RicianParams(double eta, double alpha) : eta_(eta), alpha_(alpha) {
  if (!std::isfinite(eta) || !std::isfinite(alpha))
    throw DomainError("RicianParams: parameters must be finite");
  if (alpha <= 0.0) throw DomainError("RicianParams: alpha must be > 0");
  if (eta < 0.0) throw DomainError("RicianParams: eta must be >= 0");
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("Sample: no observations");
  min_ = max_ = values_.front();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double x = values_[i];
    if (!std::isfinite(x) || x <= 0.0)
      throw DomainError("Sample: observation " + std::to_string(i + 1) +
                        " is not a finite positive number");
    const double x2 = x * x;
    sum1_ += x;
    sum2_ += x2;
    sum4_ += x2 * x2;
    sum_log_ += std::log(x);
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  all_equal_ = (max_ - min_ == 0.0);
}

namespace {

void require_point(double x, const char* fn) {
  if (!std::isfinite(x) || x <= 0.0)
    throw DomainError(std::string(fn) + ": x must be finite and > 0");
}

}  // namespace

double log_pdf(double x, const RicianParams& p) {
  require_point(x, "log_pdf");
  const double a2 = p.alpha() * p.alpha();
  const double d = x - p.eta();
  // log x - log a^2 - (x^2 + eta^2)/(2a^2) + log I0(eta x / a^2), regrouped
  // so the Gaussian and Bessel exponents cancel analytically.
  return std::log(x) - std::log(a2) - d * d / (2.0 * a2) +
         log_bessel_i0_scaled(p.eta() * x / a2);
}

double pdf(double x, const RicianParams& p) {
  require_point(x, "pdf");
  return std::exp(log_pdf(x, p));
}

double draw(const RicianParams& p, Engine& engine) {
  std::normal_distribution<double> normal;
  const double m1 = p.eta() + p.alpha() * normal(engine);
  const double m2 = p.alpha() * normal(engine);
  return std::hypot(m1, m2);
}

Sample sample(const RicianParams& p, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample: n must be >= 1");
  Engine engine = make_engine(seed, StreamPurpose::kSampling);
  std::vector<double> values(n);
  for (auto& v : values) {
    // A zero draw has probability zero; redraw rather than fail.
    do {
      v = draw(p, engine);
    } while (!(v > 0.0));
  }
  return Sample(std::move(values));
}

double raw_moment(const RicianParams& p, int order) {
  const double e2 = p.eta() * p.eta();
  const double a2 = p.alpha() * p.alpha();
  switch (order) {
    case 2:
      return e2 + 2.0 * a2;
    case 4:
      return e2 * e2 + 8.0 * e2 * a2 + 8.0 * a2 * a2;
    default:
      throw DomainError("raw_moment: only orders 2 and 4 are supported");
  }
}

namespace {

constexpr double kCdfTolerance = 1e-8;
constexpr double kPanelTolerance = 1e-14;
// Density mass beyond eta + 40 alpha is below exp(-800).
constexpr double kTailWidth = 40.0;

}  // namespace

std::vector<double> cdf_curve(std::span<const double> thresholds,
                              const RicianParams& p) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!std::isfinite(thresholds[i]) || thresholds[i] < 0.0)
      throw DomainError("cdf: threshold must be finite and >= 0");
    if (i > 0 && thresholds[i] < thresholds[i - 1])
      throw DomainError("cdf_curve: thresholds must be nondecreasing");
  }
  const double cell = 0.5 * p.alpha();
  const double lo = std::max(0.0, p.eta() - kTailWidth * p.alpha());
  const double hi = p.eta() + kTailWidth * p.alpha();
  auto density = [&p](double x) { return x > 0.0 ? pdf(x, p) : 0.0; };

  QuadratureOptions opts;
  opts.abs_tol = kPanelTolerance;
  opts.rel_tol = 0.0;

  std::vector<double> out;
  out.reserve(thresholds.size());
  double position = lo;
  double accumulated = 0.0;
  double error = 0.0;
  std::vector<double> pts;
  for (double t : thresholds) {
    const double target = std::min(t, hi);
    if (target > position) {
      // Breakpoints on the fixed lattice k * cell so that every threshold
      // shares the same leading panels.
      pts.clear();
      pts.push_back(position);
      for (double k = std::floor(position / cell) + 1.0; k * cell < target; k += 1.0)
        pts.push_back(k * cell);
      pts.push_back(target);
      const auto r = integrate(density, pts, opts);
      accumulated += r.value;
      error += r.abs_error;
      position = target;
    }
    if (error > kCdfTolerance)
      throw ConvergenceError("cdf: quadrature error bound exceeds 1e-8");
    out.push_back(std::min(accumulated, 1.0));
  }
  return out;
}

double cdf(double x_th, const RicianParams& p) {
  const double t[1] = {x_th};
  return cdf_curve(t, p).front();
}

}  // namespace rician
