#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rician/error.hpp"
#include "rician/io.hpp"
#include "rician/mcmc.hpp"
#include "rician/model.hpp"
#include "rician/predictive.hpp"

using namespace rician;

namespace {

Chain constant_chain(double eta, double alpha, std::size_t n) {
  Chain c;
  c.runs.resize(1);
  for (std::size_t i = 0; i < n; ++i) c.runs[0].draws.push_back({i + 1, eta, alpha});
  return c;
}

const Chain& fixture_chain() {
  static const Chain c = [] {
    McmcConfig cfg;
    cfg.seed = 7;
    return run_chain(load_sample(std::string(RICIAN_DATA_DIR) + "/table1.txt"), cfg);
  }();
  return c;
}

double sd_of(const std::vector<double>& x) {
  double m = 0.0, ss = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace

TEST_CASE("a constant chain gives i.i.d. draws from that law") {
  const RicianParams p(3.0, 1.5);
  const PredictiveDraws d = draw_predictive(constant_chain(3.0, 1.5, 100000), 21);
  REQUIRE(d.values.size() == 100000);
  double m2 = 0.0;
  for (double y : d.values) {
    REQUIRE(y > 0.0);
    m2 += y * y;
  }
  const double n = static_cast<double>(d.values.size());
  m2 /= n;
  const double mu2 = raw_moment(p, 2), mu4 = raw_moment(p, 4);
  CHECK(std::abs(m2 - mu2) < 4.0 * std::sqrt((mu4 - mu2 * mu2) / n));
}

TEST_CASE("predictive draws are deterministic per seed") {
  const Chain c = constant_chain(6.0, 2.0, 500);
  CHECK(draw_predictive(c, 4).values == draw_predictive(c, 4).values);
  CHECK_FALSE(draw_predictive(c, 4).values == draw_predictive(c, 5).values);
  CHECK_THROWS_AS(draw_predictive(Chain{}, 1), DomainError);
}

TEST_CASE("summary of constant and known draws") {
  PredictiveDraws d;
  d.values.assign(10, 3.25);
  PredictiveSummary s = predictive_summary(d, 0.95);
  CHECK(s.mean == 3.25);
  CHECK(s.sd == 0.0);
  CHECK(s.lo == 3.25);
  CHECK(s.hi == 3.25);
  d.values.clear();
  for (int i = 1; i <= 100; ++i) d.values.push_back(i);
  s = predictive_summary(d, 0.9);
  CHECK(s.lo == doctest::Approx(5.95).epsilon(1e-15));
  CHECK(s.hi == doctest::Approx(95.05).epsilon(1e-15));
  CHECK_THROWS_AS(predictive_summary(PredictiveDraws{}, 0.95), DomainError);
}

TEST_CASE("predictive summary on the shipped fixture") {
  const Chain& c = fixture_chain();
  const PredictiveDraws d = draw_predictive(c, 7);
  CHECK(d.values.size() == c.total_draws());
  const PredictiveSummary s = predictive_summary(d, 0.95);
  CHECK(std::abs(s.mean - 6.333) < 0.2);
  CHECK(std::abs(s.sd - 1.954) < 0.25);
  CHECK(std::abs(s.lo - 2.522) < 0.4);
  CHECK(std::abs(s.hi - 10.255) < 0.4);
}

TEST_CASE("predictive mean agrees with the mixture of Rician means") {
  const Chain& c = fixture_chain();
  const PredictiveDraws d = draw_predictive(c, 8);
  const auto etas = c.eta(), alphas = c.alpha();
  double mixture = 0.0, mean = 0.0;
  for (std::size_t j = 0; j < etas.size(); ++j) mixture += oracle::rician_mean(etas[j], alphas[j]);
  for (double y : d.values) mean += y;
  const double n = static_cast<double>(d.values.size());
  mixture /= n;
  mean /= n;
  CHECK(std::abs(mean - mixture) < 4.0 * sd_of(d.values) / std::sqrt(n));
}

TEST_CASE("parameter uncertainty widens the predictive spread") {
  const Chain& c = fixture_chain();
  const PosteriorSummary post = summarize(c, 0.95);
  const RicianParams plug(post.eta.point, post.alpha.point);
  const std::size_t n = c.total_draws();
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const PredictiveDraws d = draw_predictive(c, 500 + rep);
    const Sample ref = sample(plug, n, 900 + rep);
    const double sd_pred = sd_of(d.values);
    const std::vector<double> r(ref.values().begin(), ref.values().end());
    const double sd_ref = sd_of(r);
    // Standard error of a sample sd from the fourth central moment.
    double m = 0.0, c4 = 0.0;
    for (double x : r) m += x;
    m /= static_cast<double>(n);
    for (double x : r) c4 += std::pow(x - m, 4);
    c4 /= static_cast<double>(n);
    const double se = std::sqrt((c4 - std::pow(sd_ref, 4)) / (4.0 * sd_ref * sd_ref * static_cast<double>(n)));
    CAPTURE(rep);
    CHECK(sd_pred >= sd_ref - 2.0 * se);
  }
}
