#ifndef RICIAN_OBJECTIVE_BAYES_HPP
#define RICIAN_OBJECTIVE_BAYES_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rician/model.hpp"

namespace rician {

enum class PriorFamily { kPower, kJeffreys, kCustomTails };

/// Orders of the prior in eta near 0 (r0) and at infinity (r_inf), and in
/// alpha (k).
struct TailExponents {
  double r0 = 0.0;
  double r_inf = 0.0;
  double k = 0.0;
};

class PriorSpec {
 public:
  /// pi(eta, alpha) proportional to 1 / (alpha^(1+eps) eta^(1-eps)).
  static PriorSpec power(double epsilon);
  static PriorSpec jeffreys();
  /// eta^r0 alpha^k for eta < 1 and eta^r_inf alpha^k for eta >= 1.
  static PriorSpec custom_tails(double r0, double r_inf, double k);
  /// "jeffreys", "power:EPS" or "tails:R0,RINF,K". Throws ParseError.
  static PriorSpec parse(const std::string& text);

  PriorFamily family() const { return family_; }
  double epsilon() const { return epsilon_; }
  /// For the Jeffreys prior these are the exponents of its 1/alpha^2
  /// envelope, which is what the decision rules see.
  TailExponents tails() const;
  std::string describe() const;

 private:
  PriorSpec(PriorFamily f, double eps, TailExponents t)
      : family_(f), epsilon_(eps), custom_(t) {}
  PriorFamily family_;
  double epsilon_;
  TailExponents custom_;
};

/// Unnormalized log prior. Requires eta > 0 (DomainError otherwise).
double log_prior(const PriorSpec& spec, const RicianParams& p);

/// log_prior + log_likelihood.
double log_posterior(const PriorSpec& spec, const RicianParams& p, const Sample& s);

enum class ProprietyStatus { kProper, kImproper, kNotGuaranteed };

enum class GoverningRule {
  kGeneralImproper,  // r0 <= -1
  kGeneralProper,    // n > max(2(r_inf + 1), k + 1), data not all equal
  kFirstMoments,     // r0 > -2 and n > max(2(r_inf + 2), k + 2)
  kPowerPrior,       // eps <= 0 improper, n >= 2 eps proper
  kJeffreysPrior,    // n > 2 proper
};

struct ProprietyVerdict {
  ProprietyStatus status = ProprietyStatus::kNotGuaranteed;
  GoverningRule rule = GoverningRule::kGeneralProper;
  std::optional<std::size_t> min_n;
  bool requires_distinct_data = true;
  // Power prior with n == 2 eps exactly: the weak bound (used here) and the
  // strict bound of the general rule disagree.
  bool boundary_case = false;
};

ProprietyVerdict check_propriety(const PriorSpec& spec, std::size_t n,
                                 bool distinct_data);
ProprietyVerdict check_moment_finiteness(const PriorSpec& spec, std::size_t n,
                                         bool distinct_data);

const char* to_string(ProprietyStatus s);
const char* to_string(GoverningRule r);

struct EvidencePoint {
  double half_width = 0.0;  // box is [1/L, L]^2 in (eta, alpha)
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
};

/// Integral of exp(log_posterior - shift) over the nested boxes [1/L, L]^2
/// for each L in `ladder` (increasing, > 1). `shift` is the log posterior at
/// a central point and is reported so values are comparable across calls.
/// Computed by adding the integral over each new annulus, so the sequence
/// is nondecreasing.
struct Evidence {
  double shift = 0.0;
  std::vector<EvidencePoint> points;
};
Evidence propriety_evidence(const PriorSpec& spec, const Sample& s,
                            const std::vector<double>& ladder);

}  // namespace rician

#endif
