#include "rician/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rician/error.hpp"
#include "rician/quadrature.hpp"

namespace rician {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_argument(double y, const char* fn) {
  if (!std::isfinite(y) || y < 0.0)
    throw DomainError(std::string(fn) + ": argument must be finite and >= 0, got " +
                      std::to_string(y));
}

// sum_{m>=1} (y^2/4)^m / (m!)^2, i.e. I0(y) - 1.
double i0_series_tail(double y) {
  const double q = 0.25 * y * y;
  double term = 1.0;
  double sum = 0.0;
  for (int m = 1; m < 500; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (term <= kEps * 0.25 * (1.0 + sum)) break;
  }
  return sum;
}

// I1(y) by its power series.
double i1_series(double y) {
  const double q = 0.25 * y * y;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 500; ++m) {
    term *= q / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (term <= kEps * 0.25 * sum) break;
  }
  return 0.5 * y * sum;
}

// exp(-y) I_nu(y) from the Hankel expansion, nu in {0, 1}; y > 15.
double scaled_asymptotic(double y, int nu) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * -(mu - odd * odd) / (8.0 * k * y);
    if (std::abs(next) >= last) break;  // divergent tail
    term = next;
    last = std::abs(term);
    sum += term;
    if (last <= kEps * 0.25 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * y);
}

// 1 - I1(y)/I0(y). Above the series limit the leading terms of the two
// Hankel expansions cancel exactly and are dropped before summing.
double ratio_complement(double y) {
  if (y <= kBesselSeriesLimit) {
    const double i0 = 1.0 + i0_series_tail(y);
    return (i0 - i1_series(y)) / i0;
  }
  double t0 = 1.0, t1 = 1.0;
  double a0 = 1.0, diff = 0.0;
  double last0 = 1.0, last1 = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double n0 = t0 * -(0.0 - odd * odd) / (8.0 * k * y);
    const double n1 = t1 * -(4.0 - odd * odd) / (8.0 * k * y);
    if (std::abs(n0) >= last0 || (k > 1 && std::abs(n1) >= last1)) break;
    t0 = n0;
    t1 = n1;
    last0 = std::abs(t0);
    last1 = std::max(std::abs(t1), 1e-300);
    a0 += t0;
    diff += t0 - t1;
    if (std::abs(t0 - t1) <= kEps * 0.25 * std::abs(diff)) break;
  }
  return diff / a0;
}

// Unit-scale Rician density in a form that never overflows.
double unit_density(double x, double eta) {
  if (x <= 0.0) return 0.0;
  const double d = x - eta;
  return x * std::exp(-0.5 * d * d) * bessel_i0_scaled(eta * x);
}

// Integration window for the unit-scale density; the mass outside
// [eta - 40, eta + 40] is below exp(-800).
std::vector<double> density_breakpoints(double eta) {
  const double lo = std::max(0.0, eta - 40.0);
  const double hi = eta + 40.0;
  std::vector<double> pts;
  const int panels = 32;
  for (int i = 0; i <= panels; ++i) pts.push_back(lo + (hi - lo) * i / panels);
  if (eta > lo && eta < hi) {
    pts.push_back(eta);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  }
  return pts;
}

// Same window in the offset z = x - eta.
std::vector<double> offset_breakpoints(double eta) {
  const double lo = std::max(-eta, -40.0);
  const double hi = 40.0;
  std::vector<double> pts;
  const int panels = 32;
  for (int i = 0; i <= panels; ++i) pts.push_back(lo + (hi - lo) * i / panels);
  pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

constexpr double kPsiRelTol = 1e-12;
constexpr double kAsymptoticRho = 1e16;

void require_rho(double rho, const char* fn) {
  if (!std::isfinite(rho) || rho <= 0.0)
    throw DomainError(std::string(fn) + ": rho must be finite and > 0, got " +
                      std::to_string(rho));
}

}  // namespace

double bessel_i0_scaled(double y) {
  require_argument(y, "bessel_i0_scaled");
  if (y <= kBesselSeriesLimit) return std::exp(-y) * (1.0 + i0_series_tail(y));
  return scaled_asymptotic(y, 0);
}

double bessel_i1_scaled(double y) {
  require_argument(y, "bessel_i1_scaled");
  if (y <= kBesselSeriesLimit) return std::exp(-y) * i1_series(y);
  return scaled_asymptotic(y, 1);
}

double log_bessel_i0(double y) {
  require_argument(y, "log_bessel_i0");
  if (y <= kBesselSeriesLimit) return std::log1p(i0_series_tail(y));
  return y + std::log(scaled_asymptotic(y, 0));
}

double log_bessel_i0_scaled(double y) {
  require_argument(y, "log_bessel_i0_scaled");
  if (y <= kBesselSeriesLimit) return std::log1p(i0_series_tail(y)) - y;
  return std::log(scaled_asymptotic(y, 0));
}

double bessel_ratio(double y) {
  require_argument(y, "bessel_ratio");
  if (y == 0.0) return 0.0;
  double r;
  if (y <= kBesselSeriesLimit)
    r = i1_series(y) / (1.0 + i0_series_tail(y));
  else
    r = scaled_asymptotic(y, 1) / scaled_asymptotic(y, 0);
  return std::min(r, std::nextafter(1.0, 0.0));
}

double bessel_ratio_deficit(double y) {
  require_argument(y, "bessel_ratio_deficit");
  if (y >= 2.0) return bessel_ratio(y) - 0.5 * y;
  // I1 - (y/2) I0 = -sum_{m>=1} (y/2)^(2m+1) m / ((m!)^2 (m+1))
  const double h = 0.5 * y;
  const double q = h * h;
  double power = h;
  double numerator = 0.0;
  for (int m = 1; m < 100; ++m) {
    power *= q / (static_cast<double>(m) * m);
    const double term = power * m / (m + 1.0);
    numerator -= term;
    if (term <= kEps * 0.25 * std::abs(numerator)) break;
  }
  return numerator / (1.0 + i0_series_tail(y));
}

PsiValue psi_with_error(double rho) {
  require_rho(rho, "psi");
  if (rho > kAsymptoticRho) {
    return {1.0 - 0.5 / rho - 0.25 / (rho * rho), 1.0 / (rho * rho * rho)};
  }
  const double eta = std::sqrt(rho);
  QuadratureOptions opts;
  opts.rel_tol = kPsiRelTol;
  QuadratureResult r;
  if (rho < 1.0) {
    auto integrand = [eta](double x) {
      const double f = unit_density(x, eta);
      if (f == 0.0) return 0.0;
      const double s = x * bessel_ratio(eta * x) - eta;
      return s * s * f;
    };
    r = integrate(integrand, density_breakpoints(eta), opts);
  } else {
    // x R - eta = z - x (1 - R): both terms O(1), no cancellation with eta.
    auto integrand = [eta](double z) {
      const double x = eta + z;
      const double f = unit_density(x, eta);
      if (f == 0.0) return 0.0;
      const double s = z - x * ratio_complement(eta * x);
      return s * s * f;
    };
    r = integrate(integrand, offset_breakpoints(eta), opts);
  }
  if (!r.converged)
    throw ConvergenceError("psi: quadrature did not reach tolerance at rho = " +
                           std::to_string(rho));
  return {r.value, r.abs_error + kEps * std::abs(r.value)};
}

double psi(double rho) { return psi_with_error(rho).value; }

PsiValue jeffreys_factor(double rho) {
  require_rho(rho, "jeffreys_factor");
  if (rho > kAsymptoticRho) return {0.5 - 0.75 / rho, 1.0 / (rho * rho)};
  const double eta = std::sqrt(rho);
  const double scale = 1.0 / (2.0 * (rho + 1.0));
  // Residual of x R(eta x) regressed on x^2 under the unit-scale law.
  QuadratureOptions opts;
  opts.rel_tol = kPsiRelTol;
  QuadratureResult r;
  if (rho < 1.0) {
    auto integrand = [eta, rho, scale](double x) {
      const double f = unit_density(x, eta);
      if (f == 0.0) return 0.0;
      const double res = x * bessel_ratio_deficit(eta * x) +
                         eta * rho * (x * x - 1.0) * scale;
      return res * res * f;
    };
    r = integrate(integrand, density_breakpoints(eta), opts);
  } else {
    // In z = x - eta every term is O(1/eta), as is the residual itself.
    const double beta = eta * scale;
    auto integrand = [eta, rho, beta](double z) {
      const double x = eta + z;
      const double f = unit_density(x, eta);
      if (f == 0.0) return 0.0;
      const double res = z / (rho + 1.0) - beta * z * z + 2.0 * beta -
                         x * ratio_complement(eta * x);
      return res * res * f;
    };
    r = integrate(integrand, offset_breakpoints(eta), opts);
  }
  if (!r.converged)
    throw ConvergenceError(
        "jeffreys_factor: quadrature did not reach tolerance at rho = " +
        std::to_string(rho));
  const double value = (rho + 1.0) * r.value;
  return {value, (rho + 1.0) * r.abs_error + kEps * value};
}

// ---------------------------------------------------------------------------

namespace {

// Fourth-order finite-difference slopes on a uniform grid, limited so the
// cubic Hermite interpolant is monotone (Fritsch-Carlson).
std::vector<double> monotone_slopes(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      m[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    } else if (i == 0) {
      m[i] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    } else if (i == n - 1) {
      m[i] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    } else {
      m[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double delta = (v[k + 1] - v[k]) / h;
    if (delta == 0.0) {
      m[k] = m[k + 1] = 0.0;
      continue;
    }
    double a = m[k] / delta;
    double b = m[k + 1] / delta;
    if (a < 0.0) m[k] = a = 0.0;
    if (b < 0.0) m[k + 1] = b = 0.0;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m[k] = tau * a * delta;
      m[k + 1] = tau * b * delta;
    }
  }
  return m;
}

}  // namespace

PsiTable PsiTable::build(double rho_min, double rho_max, std::size_t knots) {
  if (!(std::isfinite(rho_min) && std::isfinite(rho_max) && rho_min > 0.0 &&
        rho_min < rho_max))
    throw DomainError("build_psi_table: need 0 < rho_min < rho_max");
  if (knots < 16) throw DomainError("build_psi_table: need at least 16 knots");

  PsiTable t;
  t.rho_min_ = rho_min;
  t.rho_max_ = rho_max;
  const double u0 = std::log(rho_min);
  const double u1 = std::log(rho_max);
  t.step_ = (u1 - u0) / static_cast<double>(knots - 1);
  t.knots_.reserve(knots);
  for (std::size_t i = 0; i < knots; ++i) {
    const double u = (i + 1 == knots) ? u1 : u0 + t.step_ * static_cast<double>(i);
    const double rho = (i == 0) ? rho_min : (i + 1 == knots) ? rho_max : std::exp(u);
    const double p = rician::psi(rho);
    const double f = jeffreys_factor(rho).value;
    if (!(f > 0.0))
      throw ConvergenceError("build_psi_table: nonpositive Jeffreys factor at rho = " +
                             std::to_string(rho));
    t.knots_.push_back({u, p, std::log(f)});
    t.psi_values_.push_back(p);
    t.factor_values_.push_back(std::log(f));
  }
  t.psi_slopes_ = monotone_slopes(t.psi_values_, t.step_);
  t.factor_slopes_ = monotone_slopes(t.factor_values_, t.step_);
  return t;
}

double PsiTable::hermite(double u, const std::vector<double>& v,
                         const std::vector<double>& m) const {
  const double u0 = knots_.front().log_rho;
  const std::size_t last = knots_.size() - 1;
  double pos = (u - u0) / step_;
  std::size_t k = static_cast<std::size_t>(std::clamp(pos, 0.0, double(last - 1)));
  if (k >= last) k = last - 1;
  const double t = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * v[k] + h10 * step_ * m[k] + h01 * v[k + 1] + h11 * step_ * m[k + 1];
}

double PsiTable::psi(double rho) const {
  if (!std::isfinite(rho) || rho <= 0.0)
    throw DomainError("PsiTable::psi: rho must be finite and > 0");
  double value;
  if (rho < rho_min_ || rho > rho_max_)
    value = rician::psi(rho);
  else
    value = hermite(std::log(rho), psi_values_, psi_slopes_);
  return std::clamp(value, std::numeric_limits<double>::min(),
                    std::nextafter(1.0, 0.0));
}

double PsiTable::log_jeffreys_factor(double rho) const {
  if (!std::isfinite(rho) || rho <= 0.0)
    throw DomainError("PsiTable::log_jeffreys_factor: rho must be finite and > 0");
  const double u = std::log(rho);
  if (rho < rho_min_)
    return factor_values_.front() + (u - knots_.front().log_rho) * factor_slopes_.front();
  if (rho > rho_max_)
    return factor_values_.back() + (u - knots_.back().log_rho) * factor_slopes_.back();
  return hermite(u, factor_values_, factor_slopes_);
}

PsiTable build_psi_table(double rho_min, double rho_max, std::size_t knots) {
  return PsiTable::build(rho_min, rho_max, knots);
}

const PsiTable& default_psi_table() {
  static const PsiTable table = PsiTable::build(1e-12, 1e12, 1201);
  return table;
}

}  // namespace rician
