#include "rician/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "rician/error.hpp"
#include "rician/estimators.hpp"
#include "rician/objective_bayes.hpp"
#include "rician/rng.hpp"

namespace rician {

std::string StudyMethod::name() const {
  switch (kind) {
    case StudyMethodKind::kMoments:
      return "mm";
    case StudyMethodKind::kMaximumLikelihood:
      return "mle";
    case StudyMethodKind::kBayesJeffreys:
      return "bayes_jeffreys";
    case StudyMethodKind::kBayesPower: {
      std::ostringstream os;
      os << "bayes_power:" << epsilon;
      return os.str();
    }
  }
  return "?";
}

StudyMethod StudyMethod::parse(const std::string& text) {
  if (text == "mm") return {StudyMethodKind::kMoments};
  if (text == "mle") return {StudyMethodKind::kMaximumLikelihood};
  if (text == "bayes_jeffreys") return {StudyMethodKind::kBayesJeffreys};
  const std::string prefix = "bayes_power:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string rest = text.substr(prefix.size());
      const double eps = std::stod(rest, &used);
      if (used == rest.size()) return {StudyMethodKind::kBayesPower, eps};
    } catch (const std::exception&) {
    }
  }
  throw DomainError("unknown study method '" + text + "'");
}

McmcConfig StudyConfig::short_chain_defaults() {
  McmcConfig m;
  m.iterations = 5500;
  m.burn_in = 500;
  m.thin = 5;
  m.chains = 1;
  return m;
}

namespace {

std::optional<PriorSpec> prior_of(const StudyMethod& m) {
  if (m.kind == StudyMethodKind::kBayesJeffreys) return PriorSpec::jeffreys();
  if (m.kind == StudyMethodKind::kBayesPower) return PriorSpec::power(m.epsilon);
  return std::nullopt;
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Outcome {
  bool included = false;
  bool failed = false;
  double eta = 0.0, alpha = 0.0;
  bool has_interval = false;
  bool eta_covered = false, alpha_covered = false;
};

Outcome fit_one(const StudyMethod& method, std::size_t method_index, const Sample& s,
                std::uint64_t sample_seed, const StudyConfig& cfg) {
  Outcome o;
  const double eta0 = cfg.truth.eta(), alpha0 = cfg.truth.alpha();
  try {
    switch (method.kind) {
      case StudyMethodKind::kMoments: {
        const EstimateReport r = mm_estimate(s);
        o.included = true;
        o.failed = r.has(kFlagMomentsUndefined);
        o.eta = r.eta_hat;
        o.alpha = r.alpha_hat;
        return o;
      }
      case StudyMethodKind::kMaximumLikelihood: {
        const EstimateReport r = mle_estimate(s);
        if (!r.converged) {
          o.failed = true;
          return o;
        }
        o.included = true;
        o.eta = r.eta_hat;
        o.alpha = r.alpha_hat;
        try {
          const WaldIntervals w = asymptotic_ci(r, s, cfg.level);
          o.has_interval = true;
          o.eta_covered = w.eta.contains(eta0);
          o.alpha_covered = w.alpha.contains(alpha0);
        } catch (const Error&) {
          o.failed = true;
        }
        return o;
      }
      case StudyMethodKind::kBayesJeffreys:
      case StudyMethodKind::kBayesPower: {
        McmcConfig mc = cfg.mcmc;
        mc.prior = *prior_of(method);
        mc.seed = derive_seed(sample_seed, StreamPurpose::kMcmcChain, method_index);
        const Chain c = run_chain(s, mc);
        const PosteriorSummary sum = summarize(c, cfg.level);
        o.included = true;
        o.eta = sum.eta.point;
        o.alpha = sum.alpha.point;
        o.has_interval = true;
        o.eta_covered = sum.eta.lo <= eta0 && eta0 <= sum.eta.hi;
        o.alpha_covered = sum.alpha.lo <= alpha0 && alpha0 <= sum.alpha.hi;
        return o;
      }
    }
  } catch (const Error&) {
    o = Outcome{};
    o.failed = true;
  }
  return o;
}

}  // namespace

void StudyConfig::validate() const {
  if (replications == 0) throw DomainError("study: replications must be >= 1");
  if (n_grid.empty()) throw DomainError("study: empty sample-size grid");
  if (methods.empty()) throw DomainError("study: no methods");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("study: level must be in (0, 1)");
  mcmc.validate();
  for (std::size_t n : n_grid) {
    if (n < 2) throw DomainError("study: sample sizes must be >= 2");
    for (const auto& m : methods) {
      const auto prior = prior_of(m);
      if (!prior) continue;
      if (check_propriety(*prior, n, true).status != ProprietyStatus::kProper)
        throw DomainError("study: " + m.name() + " is not guaranteed proper at n = " +
                          std::to_string(n));
    }
  }
}

StudyTable run_study(const StudyConfig& cfg) {
  cfg.validate();
  const std::size_t reps = cfg.replications;
  const std::size_t units = cfg.n_grid.size() * reps;
  const std::size_t nm = cfg.methods.size();
  std::vector<Outcome> outcomes(units * nm);

  parallel_for(units, cfg.threads, [&](std::size_t u) {
    const std::size_t ni = u / reps, rep = u % reps;
    const std::size_t n = cfg.n_grid[ni];
    const std::uint64_t seed = derive_seed(
        cfg.seed, StreamPurpose::kStudyReplicate, (static_cast<std::uint64_t>(n) << 32) | rep);
    const Sample s = sample(cfg.truth, n, seed);
    for (std::size_t m = 0; m < nm; ++m)
      outcomes[u * nm + m] = fit_one(cfg.methods[m], m, s, seed, cfg);
  });

  StudyTable table;
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
      for (int param = 0; param < 2; ++param) {
        StudyCell cell;
        cell.method = cfg.methods[m];
        cell.n = cfg.n_grid[ni];
        cell.parameter = param == 0 ? "eta" : "alpha";
        const double truth = param == 0 ? cfg.truth.eta() : cfg.truth.alpha();
        std::size_t intervals = 0, covered = 0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
          const Outcome& o = outcomes[(ni * reps + rep) * nm + m];
          if (o.failed) ++cell.failures;
          if (!o.included) continue;
          cell.estimates.push_back(param == 0 ? o.eta : o.alpha);
          ++cell.used;
          if (o.has_interval) {
            ++intervals;
            if (param == 0 ? o.eta_covered : o.alpha_covered) ++covered;
          }
        }
        const BiasMse bm = bias_mse(cell.estimates, truth);
        cell.bias = bm.bias;
        cell.mse = bm.mse;
        if (intervals > 0)
          cell.cp = static_cast<double>(covered) / static_cast<double>(intervals);
        table.cells.push_back(std::move(cell));
      }
    }
  }
  return table;
}

BiasMse bias_mse(std::span<const double> estimates, double truth) {
  if (estimates.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  double sum_e = 0.0, sum_e2 = 0.0;
  for (double est : estimates) {
    const double e = est - truth;
    sum_e += e;
    sum_e2 += e * e;
  }
  const double n = static_cast<double>(estimates.size());
  return {sum_e / n, sum_e2 / n};
}

const StudyCell& StudyTable::find(StudyMethodKind kind, std::size_t n,
                                  const std::string& parameter) const {
  for (const auto& c : cells)
    if (c.method.kind == kind && c.n == n && c.parameter == parameter) return c;
  throw DomainError("study table: no cell for n = " + std::to_string(n) + ", " + parameter);
}

OutageCurve outage_curve(const Chain& c, std::span<const double> gamma_grid, double level,
                         std::size_t threads) {
  if (c.total_draws() == 0) throw DomainError("outage_curve: chain has no draws");
  if (gamma_grid.empty()) throw DomainError("outage_curve: empty threshold grid");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("outage_curve: level must be in (0, 1)");
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    if (!(gamma_grid[i] >= 0.0) || !std::isfinite(gamma_grid[i]))
      throw DomainError("outage_curve: thresholds must be finite and >= 0");
    if (i > 0 && gamma_grid[i] < gamma_grid[i - 1])
      throw DomainError("outage_curve: thresholds must be nondecreasing");
  }
  const std::vector<double> etas = c.eta(), alphas = c.alpha();
  const std::size_t nd = etas.size(), ng = gamma_grid.size();

  std::vector<double> values(nd * ng);
  std::vector<char> ok(nd, 1);
  parallel_for(nd, threads, [&](std::size_t j) {
    try {
      const auto curve = cdf_curve(gamma_grid, RicianParams(etas[j], alphas[j]));
      std::copy(curve.begin(), curve.end(), values.begin() + static_cast<std::ptrdiff_t>(j * ng));
    } catch (const ConvergenceError&) {
      ok[j] = 0;
    }
  });

  OutageCurve out;
  out.level = level;
  const PosteriorSummary sum = summarize(c, level);
  std::vector<double> point(ng, std::numeric_limits<double>::quiet_NaN());
  try {
    point = cdf_curve(gamma_grid, RicianParams(sum.eta.point, sum.alpha.point));
  } catch (const ConvergenceError&) {
  }
  const double tail = 0.5 * (1.0 - level);
  std::vector<double> column;
  column.reserve(nd);
  for (std::size_t g = 0; g < ng; ++g) {
    column.clear();
    for (std::size_t j = 0; j < nd; ++j)
      if (ok[j]) column.push_back(values[j * ng + g]);
    OutagePoint p;
    p.gamma_th = gamma_grid[g];
    p.point = point[g];
    if (column.empty()) {
      p.lo = p.hi = std::numeric_limits<double>::quiet_NaN();
    } else {
      std::sort(column.begin(), column.end());
      p.lo = quantile_sorted(column, tail);
      p.hi = quantile_sorted(column, 1.0 - tail);
    }
    out.points.push_back(p);
  }
  for (char f : ok)
    if (!f) ++out.failed_draws;
  return out;
}

}  // namespace rician
