// Independent reference computations used by the unit and acceptance
// tests. Nothing here calls into the library.
#ifndef RICIAN_TESTS_ORACLES_HPP
#define RICIAN_TESTS_ORACLES_HPP

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<200>>;
using Mid = boost::multiprecision::cpp_dec_float_50;

// I_nu(y), nu in {0, 1}, summed from the power series in 200 digits.
inline Big bessel_series(int nu, const Big& y) {
  const Big q = y * y / 4;
  Big term = nu == 0 ? Big(1) : y / 2;
  Big sum = term;
  const Big tiny("1e-210");
  for (int m = 1; m < 2000; ++m) {
    term *= q / (Big(m) * Big(m + nu));
    sum += term;
    if (term < tiny * sum) break;
  }
  return sum;
}

// exp(-y) I_nu(y) in double, from the 200-digit series.
inline double scaled_series(int nu, double y) {
  const Big by(y);
  return static_cast<double>(exp(-by) * bessel_series(nu, by));
}

// exp(-y) I_nu(y) from the Hankel expansion in 50 digits, truncated at its
// smallest term (error about exp(-2y), below 1e-13 for y >= 15).
inline double scaled_hankel(int nu, double y) {
  const Mid my(y);
  const Mid mu = 4 * nu * nu;
  Mid term = 1, sum = 1;
  Mid last = 1;
  for (int k = 1; k < 400; ++k) {
    const Mid odd = 2 * k - 1;
    Mid next = term * -(mu - odd * odd) / (8 * k * my);
    if (abs(next) >= last) break;
    term = next;
    last = abs(term);
    sum += term;
    if (last < Mid("1e-45")) break;
  }
  const Mid pi = boost::math::constants::pi<Mid>();
  return static_cast<double>(sum / sqrt(2 * pi * my));
}

// Log-likelihood through Boost's Bessel function.
inline double log_likelihood(double eta, double alpha, std::span<const double> xs) {
  const double a2 = alpha * alpha;
  double acc = 0.0;
  for (double x : xs) {
    const double z = eta * x / a2;
    acc += std::log(x / a2) - (x * x + eta * eta) / (2.0 * a2) +
           std::log(boost::math::cyl_bessel_i(0, z));
  }
  return acc;
}

// Unit-scale (alpha = 1) expectation of g(x) under Rice(sqrt(rho), 1), in
// long double with tanh-sinh quadrature and Boost's Bessel functions.
template <class G>
long double unit_expectation(double rho, G&& g) {
  using LD = long double;
  const LD eta = std::sqrt(static_cast<LD>(rho));
  auto density = [eta](LD x) -> LD {
    if (x <= 0) return 0;
    return x * std::exp(-(x * x + eta * eta) / 2) * boost::math::cyl_bessel_i(0, eta * x);
  };
  boost::math::quadrature::tanh_sinh<LD> ts;
  const LD lo = std::max<LD>(0, eta - 40), hi = eta + 40;
  auto f = [&](LD x) { return g(x, eta) * density(x); };
  // Split at the mode so the peak is resolved.
  const LD mid = std::max<LD>(eta, 1);
  // Each piece is shifted to start at 0: Boost's long-double tanh-sinh can
  // place an abscissa exactly on a nonzero left endpoint.
  auto piece = [&](LD a, LD b) {
    return ts.integrate([&](LD t) { return f(a + t); }, LD(0), b - a, 1e-18L);
  };
  LD total = 0;
  if (mid > lo) total += piece(lo, mid);
  total += piece(mid, hi);
  return total;
}

// E[x^2 R(eta x)^2] - rho, R = I1/I0.
inline long double psi(double rho) {
  const long double second = unit_expectation(rho, [](long double x, long double eta) {
    if (x == 0) return 0.0L;
    const long double r = boost::math::cyl_bessel_i(1, eta * x) / boost::math::cyl_bessel_i(0, eta * x);
    return x * x * r * r;
  });
  return second - static_cast<long double>(rho);
}

// Mean of Rice(eta, alpha): alpha sqrt(pi/2) L_{1/2}(-eta^2 / (2 alpha^2)).
inline double rician_mean(double eta, double alpha) {
  const double x = -eta * eta / (2.0 * alpha * alpha);
  const double h = -x / 2.0;
  // exp(x/2) [(1 - x) I0(-x/2) - x I1(-x/2)], with the exponentials combined.
  const double l = (1.0 - x) * boost::math::cyl_bessel_i(0, h) * std::exp(-h) -
                   x * boost::math::cyl_bessel_i(1, h) * std::exp(-h);
  return alpha * std::sqrt(boost::math::constants::half_pi<double>()) * l;
}

// Maximum of the log-likelihood by a points x points grid on the box,
// followed by repeated 21 x 21 zooms around the best node.
inline std::pair<double, double> mle_grid(std::span<const double> xs, double eta_lo,
                                          double eta_hi, double alpha_lo, double alpha_hi,
                                          int points) {
  double best_e = eta_lo, best_a = alpha_lo;
  double best = -INFINITY;
  double de = (eta_hi - eta_lo) / (points - 1), da = (alpha_hi - alpha_lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const double e = eta_lo + de * i, a = alpha_lo + da * j;
      const double ll = log_likelihood(e, a, xs);
      if (ll > best) {
        best = ll;
        best_e = e;
        best_a = a;
      }
    }
  }
  while (de > 1e-7 || da > 1e-7) {
    const double ce = best_e, ca = best_a;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const double e = ce + de * i / 10.0, a = ca + da * j / 10.0;
        if (e < 0 || a <= 0) continue;
        const double ll = log_likelihood(e, a, xs);
        if (ll > best) {
          best = ll;
          best_e = e;
          best_a = a;
        }
      }
    }
    de /= 5.0;
    da /= 5.0;
  }
  return {best_e, best_a};
}

}  // namespace oracle

#endif
