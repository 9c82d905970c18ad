#ifndef RICIAN_QUADRATURE_HPP
#define RICIAN_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace rician {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // Kronrod-minus-Gauss estimate, summed over panels
  std::size_t evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-12;
  std::size_t max_panels = 4000;
};

/// Globally adaptive 21-point Gauss-Kronrod integration of f over the
/// partition given by `breakpoints` (at least two increasing points). The
/// panel with the largest error estimate is bisected until
/// error <= max(abs_tol, rel_tol * |value|) or max_panels is reached.
QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& options = {});

/// Single non-adaptive G10/K21 panel on [a, b].
QuadratureResult gauss_kronrod21(const std::function<double(double)>& f,
                                 double a, double b);

}  // namespace rician

#endif
