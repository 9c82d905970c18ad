#include "rician/objective_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rician/error.hpp"
#include "rician/estimators.hpp"
#include "rician/quadrature.hpp"
#include "rician/special_functions.hpp"

namespace rician {

PriorSpec PriorSpec::power(double epsilon) {
  if (!std::isfinite(epsilon)) throw DomainError("power prior: epsilon must be finite");
  return PriorSpec(PriorFamily::kPower, epsilon, {});
}

PriorSpec PriorSpec::jeffreys() { return PriorSpec(PriorFamily::kJeffreys, 0.0, {}); }

PriorSpec PriorSpec::custom_tails(double r0, double r_inf, double k) {
  if (!std::isfinite(r0) || !std::isfinite(r_inf) || !std::isfinite(k))
    throw DomainError("custom prior: exponents must be finite");
  return PriorSpec(PriorFamily::kCustomTails, 0.0, {r0, r_inf, k});
}

namespace {

double parse_real(const std::string& text, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(v))
    throw ParseError("bad number '" + text + "' in prior '" + whole + "'", 0);
  return v;
}

}  // namespace

PriorSpec PriorSpec::parse(const std::string& text) {
  if (text == "jeffreys") return jeffreys();
  if (text.rfind("power:", 0) == 0) return power(parse_real(text.substr(6), text));
  if (text.rfind("tails:", 0) == 0) {
    std::vector<double> v;
    std::string rest = text.substr(6);
    std::size_t start = 0;
    while (true) {
      const auto comma = rest.find(',', start);
      v.push_back(parse_real(rest.substr(start, comma - start), text));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (v.size() != 3) throw ParseError("tails prior needs R0,RINF,K: '" + text + "'", 0);
    return custom_tails(v[0], v[1], v[2]);
  }
  throw ParseError("unknown prior '" + text + "' (jeffreys, power:EPS, tails:R0,RINF,K)", 0);
}

TailExponents PriorSpec::tails() const {
  switch (family_) {
    case PriorFamily::kPower:
      return {epsilon_ - 1.0, epsilon_ - 1.0, -epsilon_ - 1.0};
    case PriorFamily::kJeffreys:
      return {0.0, 0.0, -2.0};
    case PriorFamily::kCustomTails:
      return custom_;
  }
  return custom_;
}

std::string PriorSpec::describe() const {
  std::ostringstream os;
  switch (family_) {
    case PriorFamily::kPower:
      os << "power:" << epsilon_;
      break;
    case PriorFamily::kJeffreys:
      os << "jeffreys";
      break;
    case PriorFamily::kCustomTails:
      os << "tails:" << custom_.r0 << ',' << custom_.r_inf << ',' << custom_.k;
      break;
  }
  return os.str();
}

double log_prior(const PriorSpec& spec, const RicianParams& p) {
  if (!(p.eta() > 0.0)) throw DomainError("log_prior: eta must be > 0");
  const double log_eta = std::log(p.eta());
  const double log_alpha = std::log(p.alpha());
  switch (spec.family()) {
    case PriorFamily::kPower: {
      const double e = spec.epsilon();
      return -(1.0 + e) * log_alpha - (1.0 - e) * log_eta;
    }
    case PriorFamily::kJeffreys: {
      const double lf = default_psi_table().log_jeffreys_factor(p.rho());
      if (!std::isfinite(lf))
        throw DomainError("log_prior: Jeffreys factor is not positive at this rho");
      return 0.5 * lf - 2.0 * log_alpha;
    }
    case PriorFamily::kCustomTails: {
      const TailExponents t = spec.tails();
      return (p.eta() < 1.0 ? t.r0 : t.r_inf) * log_eta + t.k * log_alpha;
    }
  }
  return 0.0;
}

double log_posterior(const PriorSpec& spec, const RicianParams& p, const Sample& s) {
  return log_prior(spec, p) + log_likelihood(p, s);
}

namespace {

// Smallest integer strictly above x.
std::size_t strictly_above(double x) {
  if (x < 0.0) return 0;
  return static_cast<std::size_t>(std::floor(x)) + 1;
}

}  // namespace

ProprietyVerdict check_propriety(const PriorSpec& spec, std::size_t n,
                                 bool distinct_data) {
  ProprietyVerdict v;
  const TailExponents t = spec.tails();
  std::size_t min_n = 0;
  switch (spec.family()) {
    case PriorFamily::kPower: {
      v.rule = GoverningRule::kPowerPrior;
      const double eps = spec.epsilon();
      if (eps <= 0.0) {
        v.status = ProprietyStatus::kImproper;
        v.requires_distinct_data = false;
        return v;
      }
      min_n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(2.0 * eps)));
      const double twice = 2.0 * eps;
      v.boundary_case = twice == std::floor(twice) && static_cast<double>(n) == twice;
      break;
    }
    case PriorFamily::kJeffreys:
      v.rule = GoverningRule::kJeffreysPrior;
      min_n = 3;
      break;
    case PriorFamily::kCustomTails:
      if (t.r0 <= -1.0) {
        v.rule = GoverningRule::kGeneralImproper;
        v.status = ProprietyStatus::kImproper;
        v.requires_distinct_data = false;
        return v;
      }
      v.rule = GoverningRule::kGeneralProper;
      min_n = std::max<std::size_t>(
          2, strictly_above(std::max(2.0 * (t.r_inf + 1.0), t.k + 1.0)));
      break;
  }
  v.min_n = min_n;
  v.status = (distinct_data && n >= min_n) ? ProprietyStatus::kProper
                                           : ProprietyStatus::kNotGuaranteed;
  return v;
}

ProprietyVerdict check_moment_finiteness(const PriorSpec& spec, std::size_t n,
                                         bool distinct_data) {
  ProprietyVerdict v;
  v.rule = GoverningRule::kFirstMoments;
  const TailExponents t = spec.tails();
  if (t.r0 <= -2.0) return v;  // hypothesis not met; nothing can be said

  const ProprietyVerdict base = check_propriety(spec, n, distinct_data);
  if (base.status == ProprietyStatus::kImproper) {
    v.status = ProprietyStatus::kImproper;
    v.rule = base.rule;
    v.requires_distinct_data = false;
    return v;
  }
  const std::size_t own = strictly_above(std::max(2.0 * (t.r_inf + 2.0), t.k + 2.0));
  const std::size_t min_n = std::max(own, base.min_n.value_or(0));
  v.min_n = min_n;
  v.status = (distinct_data && n >= min_n) ? ProprietyStatus::kProper
                                           : ProprietyStatus::kNotGuaranteed;
  return v;
}

const char* to_string(ProprietyStatus s) {
  switch (s) {
    case ProprietyStatus::kProper:
      return "PROPER";
    case ProprietyStatus::kImproper:
      return "IMPROPER";
    case ProprietyStatus::kNotGuaranteed:
      return "NOT_GUARANTEED";
  }
  return "?";
}

const char* to_string(GoverningRule r) {
  switch (r) {
    case GoverningRule::kGeneralImproper:
      return "general_improper";
    case GoverningRule::kGeneralProper:
      return "general_proper";
    case GoverningRule::kFirstMoments:
      return "first_moments";
    case GoverningRule::kPowerPrior:
      return "power_prior";
    case GoverningRule::kJeffreysPrior:
      return "jeffreys_prior";
  }
  return "?";
}

namespace {

struct Rect {
  double u0, u1, v0, v1;  // log eta and log alpha ranges
};

std::vector<double> half_unit_breaks(double a, double b) {
  std::vector<double> pts{a};
  for (double x = std::floor(2.0 * a) / 2.0 + 0.5; x < b; x += 0.5) pts.push_back(x);
  pts.push_back(b);
  return pts;
}

QuadratureResult integrate_rect(const PriorSpec& spec, const Sample& s, double shift,
                                const Rect& r, bool& inner_ok) {
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-300;
  const auto vbreaks = half_unit_breaks(r.v0, r.v1);
  auto row = [&](double u) {
    const double eta = std::exp(u);
    auto col = [&](double v) {
      const double alpha = std::exp(v);
      return std::exp(log_posterior(spec, RicianParams(eta, alpha), s) - shift + u + v);
    };
    const auto res = integrate(col, vbreaks, opts);
    if (!res.converged) inner_ok = false;
    return res.value;
  };
  QuadratureOptions outer = opts;
  outer.rel_tol = 1e-9;
  return integrate(row, half_unit_breaks(r.u0, r.u1), outer);
}

}  // namespace

Evidence propriety_evidence(const PriorSpec& spec, const Sample& s,
                            const std::vector<double>& ladder) {
  if (ladder.empty()) throw DomainError("propriety_evidence: empty ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 1.0) || !std::isfinite(ladder[i]) ||
        (i > 0 && !(ladder[i] > ladder[i - 1])))
      throw DomainError("propriety_evidence: ladder must be increasing and > 1");
  }
  Evidence out;
  const EstimateReport mm = mm_estimate(s);
  double eta0 = mm.eta_hat, alpha0 = mm.alpha_hat;
  if (!(eta0 > 0.0 && alpha0 > 0.0)) {
    eta0 = 0.5 * std::sqrt(s.m2());
    alpha0 = std::sqrt(3.0 * s.m2() / 8.0);
  }
  out.shift = log_posterior(spec, RicianParams(eta0, alpha0), s);

  double total = 0.0, error = 0.0;
  bool all_ok = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double a = std::log(ladder[i]);
    std::vector<Rect> pieces;
    if (i == 0) {
      pieces.push_back({-a, a, -a, a});
    } else {
      const double b = prev;
      pieces.push_back({-a, a, -a, -b});
      pieces.push_back({-a, a, b, a});
      pieces.push_back({-a, -b, -b, b});
      pieces.push_back({b, a, -b, b});
    }
    for (const Rect& r : pieces) {
      bool inner_ok = true;
      const auto res = integrate_rect(spec, s, out.shift, r, inner_ok);
      total += res.value;
      error += res.abs_error;
      all_ok = all_ok && inner_ok && res.converged;
    }
    out.points.push_back({ladder[i], total, error, all_ok});
    prev = a;
  }
  return out;
}

}  // namespace rician
