#ifndef RICIAN_SPECIAL_FUNCTIONS_HPP
#define RICIAN_SPECIAL_FUNCTIONS_HPP

// Modified Bessel functions of orders 0 and 1 in scaled and logarithmic
// form, and the Fisher-information integral Psi(rho) of the Rician model.
//
// I0 and I1 are summed from their power series for y <= kBesselSeriesLimit
// and from the exponentially scaled Hankel expansion above it. Every entry
// point rejects negative or non-finite arguments with DomainError.

#include <cstddef>
#include <vector>

namespace rician {

inline constexpr double kBesselSeriesLimit = 15.0;

/// exp(-y) * I0(y); in (0, 1], strictly decreasing.
double bessel_i0_scaled(double y);

/// exp(-y) * I1(y).
double bessel_i1_scaled(double y);

/// log I0(y), finite for every representable y.
double log_bessel_i0(double y);

/// log(exp(-y) I0(y)) = log I0(y) - y.
double log_bessel_i0_scaled(double y);

/// I1(y) / I0(y), in [0, 1).
double bessel_ratio(double y);

/// I1(y) / I0(y) - y / 2, evaluated without cancellation for small y.
double bessel_ratio_deficit(double y);

struct PsiValue {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Psi(rho) = E[x^2 R(eta x)^2] - rho for the unit-scale Rician law with
/// rho = eta^2, where R = I1/I0. Evaluated as the variance of x R(eta x),
/// which equals the integral minus rho without the subtraction.
/// Throws DomainError for rho <= 0 and ConvergenceError if the quadrature
/// cannot certify its tolerance.
PsiValue psi_with_error(double rho);
double psi(double rho);

/// (rho + 1) Psi(rho) - rho, the squared Jeffreys factor. Computed as a
/// regression residual variance so that it keeps full relative accuracy as
/// rho -> 0, where it behaves like rho^3 / 4.
PsiValue jeffreys_factor(double rho);

/// Monotone piecewise-cubic table of Psi and log((rho+1)Psi - rho) on a
/// uniform grid in log rho. Immutable once built.
class PsiTable {
 public:
  struct Knot {
    double log_rho;
    double psi;
    double log_factor;
  };

  /// Throws DomainError unless 0 < rho_min < rho_max and knots >= 16.
  static PsiTable build(double rho_min, double rho_max, std::size_t knots);

  /// Interpolated Psi, clamped to the open interval (0, 1). Outside the
  /// tabulated range Psi is evaluated directly.
  double psi(double rho) const;

  /// Interpolated log of the Jeffreys factor. Outside the tabulated range
  /// the end segments are extended linearly in (log rho, log factor).
  double log_jeffreys_factor(double rho) const;

  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }
  static constexpr int interpolation_order() { return 3; }
  const std::vector<Knot>& knots() const { return knots_; }

 private:
  PsiTable() = default;
  double hermite(double log_rho, const std::vector<double>& values,
                 const std::vector<double>& slopes) const;

  double rho_min_ = 0.0;
  double rho_max_ = 0.0;
  double step_ = 0.0;
  std::vector<Knot> knots_;
  std::vector<double> psi_values_, psi_slopes_;
  std::vector<double> factor_values_, factor_slopes_;
};

PsiTable build_psi_table(double rho_min, double rho_max, std::size_t knots);

/// Process-wide table on [1e-12, 1e12], built on first use.
const PsiTable& default_psi_table();

}  // namespace rician

#endif
