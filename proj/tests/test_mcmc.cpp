#include <boost/math/distributions/gamma.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rician/error.hpp"
#include "rician/io.hpp"
#include "rician/mcmc.hpp"
#include "rician/model.hpp"

using namespace rician;

namespace {

Sample table1() { return load_sample(std::string(RICIAN_DATA_DIR) + "/table1.txt"); }

std::vector<double> normal_series(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 e(seed);
  std::normal_distribution<double> z;
  std::vector<double> out(n);
  for (auto& v : out) v = z(e);
  return out;
}

// Mean and its standard error from 100 batch means.
std::pair<double, double> batch_mean(const std::vector<double>& x) {
  const std::size_t b = 100, len = x.size() / b;
  std::vector<double> means(b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < len; ++j) means[i] += x[i * len + j];
    means[i] /= static_cast<double>(len);
  }
  double m = 0.0, ss = 0.0;
  for (double v : means) m += v;
  m /= b;
  for (double v : means) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (b - 1) / b)};
}

double log_gamma_density(double x, double shape, double rate) {
  return (shape - 1.0) * std::log(x) - rate * x;
}

}  // namespace

TEST_CASE("configuration validation") {
  McmcConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.draws_per_chain() == 10000);
  c.burn_in = c.iterations;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = McmcConfig{};
  c.thin = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = McmcConfig{};
  c.chains = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = McmcConfig{};
  c.d_eta = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = McmcConfig{};
  c.d_alpha = -1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("Hastings correction") {
  for (double x : {1e-3, 0.5, 6.0, 1e4})
    for (double d : {1.0, 100.0, 1e6}) CHECK(gamma_log_hastings(x, x, d) == 0.0);
  // Against the Gamma densities directly.
  for (double d : {2.0, 50.0}) {
    for (auto [x, y] : {std::pair{2.0, 2.3}, {5.0, 4.1}, {0.7, 0.9}}) {
      const boost::math::gamma_distribution<double> from_x(d, x / d), from_y(d, y / d);
      const double expected = std::log(boost::math::pdf(from_y, x)) - std::log(boost::math::pdf(from_x, y));
      CHECK(gamma_log_hastings(x, y, d) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("a constant offset in the log density leaves the chain bit-identical") {
  McmcConfig cfg;
  cfg.iterations = 5000;
  cfg.burn_in = 100;
  cfg.thin = 1;
  cfg.seed = 12;
  const Sample s = table1();
  LogDensity base = [&](double e, double a) { return log_posterior(cfg.prior, RicianParams(e, a), s); };
  LogDensity shifted = [&](double e, double a) { return base(e, a) + 1000.0; };
  const ChainRun r1 = run_metropolis(base, 6.0, 2.0, cfg, 0);
  const ChainRun r2 = run_metropolis(shifted, 6.0, 2.0, cfg, 0);
  REQUIRE(r1.draws.size() == r2.draws.size());
  bool identical = true;
  for (std::size_t i = 0; i < r1.draws.size(); ++i)
    identical = identical && r1.draws[i].eta == r2.draws[i].eta && r1.draws[i].alpha == r2.draws[i].alpha;
  CHECK(identical);
  CHECK(r1.accept_rate_eta == r2.accept_rate_eta);
}

TEST_CASE("sampler recovers a product of Gamma densities") {
  const double se = 3.0, re = 1.5, sa = 5.0, ra = 2.0;
  LogDensity target = [&](double e, double a) {
    return log_gamma_density(e, se, re) + log_gamma_density(a, sa, ra);
  };
  McmcConfig cfg;
  cfg.iterations = 100500;
  cfg.burn_in = 500;
  cfg.thin = 1;
  cfg.d_eta = 4.0;
  cfg.d_alpha = 6.0;
  cfg.seed = 2718;
  const ChainRun r = run_metropolis(target, 1.0, 1.0, cfg, 0);
  REQUIRE(r.draws.size() == 100000);
  std::vector<double> e, a;
  for (const auto& d : r.draws) {
    CHECK_MESSAGE(d.eta > 0.0, "");
    e.push_back(d.eta);
    a.push_back(d.alpha);
  }
  auto check_moments = [](const std::vector<double>& x, double mean, double var) {
    const auto [m, m_se] = batch_mean(x);
    CHECK(std::abs(m - mean) < 3.0 * m_se);
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
    const auto [v, v_se] = batch_mean(sq);
    CHECK(std::abs(v - var) < 3.0 * v_se);
  };
  check_moments(e, se / re, se / (re * re));
  check_moments(a, sa / ra, sa / (ra * ra));
}

TEST_CASE("Geweke calibration on independent normal series") {
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto x = normal_series(1000 + seed, 10000);
    if (std::abs(geweke_z(x)) < 1.96) ++inside;
  }
  const double frac = inside / 500.0;
  CHECK(frac >= 0.92);
  CHECK(frac <= 0.98);
}

TEST_CASE("Geweke detects a shifted start and rejects degenerate input") {
  auto x = normal_series(5, 10000);
  for (std::size_t i = 0; i < x.size() / 2; ++i) x[i] += 5.0;
  CHECK(std::abs(geweke_z(x)) > 10.0);
  const std::vector<double> flat(1000, 2.5);
  CHECK_THROWS_AS(geweke_z(flat), ConvergenceError);
  CHECK_THROWS_AS(geweke_z(std::vector<double>(50, 1.0)), DomainError);
  CHECK_THROWS_AS(geweke_z(x, 0.6, 0.5), DomainError);
  CHECK_THROWS_AS(geweke_z(x, 0.0, 0.5), DomainError);
}

TEST_CASE("autocorrelation") {
  const auto x = normal_series(9, 100000);
  const auto r = autocorrelation(x, 50);
  CHECK(r[0] == 1.0);
  for (std::size_t l = 1; l <= 50; ++l) CHECK(std::abs(r[l]) < 0.02);

  std::mt19937_64 e(10);
  std::normal_distribution<double> z;
  std::vector<double> ar(100000);
  double prev = 0.0;
  for (int i = 0; i < 1000; ++i) prev = 0.8 * prev + z(e);
  for (auto& v : ar) v = prev = 0.8 * prev + z(e);
  const auto ra = autocorrelation(ar, 10);
  for (std::size_t l = 0; l <= 10; ++l) CHECK(std::abs(ra[l] - std::pow(0.8, l)) < 0.02);

  CHECK_THROWS_AS(autocorrelation(x, x.size()), DomainError);
  CHECK_THROWS_AS(autocorrelation(std::vector<double>(10, 1.0), 2), DomainError);
}

TEST_CASE("quantiles and summaries") {
  std::vector<double> seq;
  for (int i = 100; i >= 1; --i) seq.push_back(i);
  CHECK(quantile(seq, 0.05) == doctest::Approx(5.95).epsilon(1e-15));
  CHECK(quantile(seq, 0.95) == doctest::Approx(95.05).epsilon(1e-15));
  CHECK(quantile(seq, 0.0) == 1.0);
  CHECK(quantile(seq, 1.0) == 100.0);
  const ParamSummary s = summarize_values(seq, 0.9);
  CHECK(s.lo == doctest::Approx(5.95).epsilon(1e-15));
  CHECK(s.hi == doctest::Approx(95.05).epsilon(1e-15));
  CHECK(s.median == 50.5);
  CHECK(s.mean == 50.5);
  CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), DomainError);
  CHECK_THROWS_AS(summarize_values(seq, 1.0), DomainError);

  Chain c;
  c.runs.resize(2);
  for (int i = 0; i < 7; ++i) {
    c.runs[0].draws.push_back({std::size_t(i + 1), 0.1, 0.7});
    c.runs[1].draws.push_back({std::size_t(i + 1), 0.1, 0.7});
  }
  const PosteriorSummary ps = summarize(c, 0.95);
  CHECK(ps.eta.mean == 0.1);
  CHECK(ps.eta.median == 0.1);
  CHECK(ps.eta.sd == 0.0);
  CHECK(ps.eta.lo == 0.1);
  CHECK(ps.eta.hi == 0.1);
  CHECK(ps.alpha.point == 0.7);
  CHECK_THROWS_AS(summarize(Chain{}, 0.95), DomainError);
}

TEST_CASE("initial state falls back to the median when moments fail") {
  const Sample s({1, 1, 1, 10});
  const Draw d = initial_state(s);
  CHECK(d.eta == 1.0);
  CHECK(d.alpha == doctest::Approx(std::sqrt(s.m2() / 2.0 - 0.5)).epsilon(1e-15));
  const Draw t = initial_state(table1());
  CHECK(t.eta == doctest::Approx(6.0949).epsilon(1e-4));
}

TEST_CASE("propriety gate runs before sampling") {
  const Sample two({2.0, 8.0});
  McmcConfig cfg;
  cfg.iterations = 200;
  cfg.burn_in = 0;
  CHECK_THROWS_AS(run_chain(two, cfg), ProprietyError);
  cfg.prior = PriorSpec::power(-1.0);
  CHECK_THROWS_AS(run_chain(table1(), cfg), ProprietyError);
  cfg.allow_improper = true;
  const Chain c = run_chain(table1(), cfg);
  CHECK(c.total_draws() == 2 * 40);
}

TEST_CASE("chains are deterministic per seed and distinct per index") {
  McmcConfig cfg;
  cfg.iterations = 3000;
  cfg.seed = 99;
  const Sample s = table1();
  const Chain a = run_chain(s, cfg), b = run_chain(s, cfg);
  CHECK(a.eta() == b.eta());
  CHECK(a.alpha() == b.alpha());
  CHECK(a.runs[0].draws.size() == cfg.draws_per_chain());
  CHECK_FALSE(a.runs[0].draws[10].eta == a.runs[1].draws[10].eta);
  cfg.seed = 100;
  CHECK_FALSE(run_chain(s, cfg).eta() == a.eta());
}

TEST_CASE("default run on the shipped fixture") {
  McmcConfig cfg;
  cfg.seed = 7;
  const Chain c = run_chain(table1(), cfg);
  REQUIRE(c.runs.size() == 2);
  for (const auto& r : c.runs) {
    REQUIRE(r.draws.size() == 10000);
    CHECK(r.accept_rate_eta > 0.0);
    CHECK(r.accept_rate_eta < 1.0);
    CHECK(r.accept_rate_alpha > 0.0);
    CHECK(r.accept_rate_alpha < 1.0);
    std::vector<double> e, a;
    for (const auto& d : r.draws) {
      e.push_back(d.eta);
      a.push_back(d.alpha);
    }
    CHECK(std::abs(geweke_z(e)) < 1.96);
    CHECK(std::abs(geweke_z(a)) < 1.96);
  }
  for (double v : c.eta()) REQUIRE(v > 0.0);
  for (double v : c.alpha()) REQUIRE(v > 0.0);
  const PosteriorSummary s = summarize(c, 0.95);
  CHECK(std::abs(s.eta.median - 5.961) < 0.15);
  CHECK(std::abs(s.alpha.mean - 2.004) < 0.10);
  CHECK(std::abs(s.eta.lo - 5.167) < 0.2);
  CHECK(std::abs(s.eta.hi - 6.673) < 0.2);
  CHECK(std::abs(s.alpha.lo - 1.562) < 0.15);
  CHECK(std::abs(s.alpha.hi - 2.626) < 0.15);
  CHECK(s.eta.lo <= s.eta.median);
  CHECK(s.eta.median <= s.eta.hi);
}
