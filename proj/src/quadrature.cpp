#include "rician/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace rician {
namespace {

// Kronrod abscissae (positive half, descending) and weights; the even
// entries 1, 3, ..., 9 are the 10-point Gauss abscissae.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067890797, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace

QuadratureResult gauss_kronrod21(const std::function<double(double)>& f,
                                 double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  QuadratureResult r;
  r.value = kronrod * half;
  r.abs_error = std::abs((kronrod - gauss) * half);
  r.evaluations = 21;
  r.converged = true;
  return r;
}

QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate: need at least two breakpoints");

  std::priority_queue<Panel> panels;
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b >= a)) throw std::invalid_argument("integrate: unsorted breakpoints");
    if (b == a) continue;
    const auto r = gauss_kronrod21(f, a, b);
    total.value += r.value;
    total.abs_error += r.abs_error;
    total.evaluations += r.evaluations;
    panels.push({a, b, r.value, r.abs_error});
  }

  auto target = [&] {
    return std::max(options.abs_tol, options.rel_tol * std::abs(total.value));
  };

  while (!panels.empty() && total.abs_error > target() &&
         panels.size() < options.max_panels) {
    const Panel worst = panels.top();
    // Bisection below double resolution cannot improve the estimate.
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    panels.pop();
    const auto left = gauss_kronrod21(f, worst.a, mid);
    const auto right = gauss_kronrod21(f, mid, worst.b);
    total.value += left.value + right.value - worst.value;
    total.abs_error += left.abs_error + right.abs_error - worst.error;
    total.evaluations += 42;
    panels.push({worst.a, mid, left.value, left.abs_error});
    panels.push({mid, worst.b, right.value, right.abs_error});
  }

  // Re-sum in positional order: drops the drift of the incremental updates
  // and makes integrals over a common prefix partition round identically.
  std::vector<Panel> ordered;
  ordered.reserve(panels.size());
  while (!panels.empty()) {
    ordered.push_back(panels.top());
    panels.pop();
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  double value = 0.0, error = 0.0;
  for (const auto& p : ordered) {
    value += p.value;
    error += p.error;
  }
  total.value = value;
  total.abs_error = error;
  total.converged = total.abs_error <= target();
  return total;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& options) {
  const double pts[2] = {a, b};
  return integrate(f, pts, options);
}

}  // namespace rician
