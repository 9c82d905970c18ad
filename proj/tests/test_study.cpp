#include <cmath>
#include <vector>

#include "doctest.h"
#include "rician/error.hpp"
#include "rician/io.hpp"
#include "rician/mcmc.hpp"
#include "rician/model.hpp"
#include "rician/study.hpp"

using namespace rician;

namespace {

StudyConfig small_study(std::size_t threads) {
  StudyConfig cfg;
  cfg.n_grid = {10, 30};
  cfg.replications = 20;
  cfg.seed = 31;
  cfg.mcmc.iterations = 1500;
  cfg.threads = threads;
  return cfg;
}

const Chain& fixture_chain() {
  static const Chain c = [] {
    McmcConfig cfg;
    cfg.seed = 3;
    cfg.iterations = 10500;
    return run_chain(load_sample(std::string(RICIAN_DATA_DIR) + "/table1.txt"), cfg);
  }();
  return c;
}

}  // namespace

TEST_CASE("bias and mse of degenerate inputs") {
  const std::vector<double> exact{6.0};
  const BiasMse b = bias_mse(exact, 6.0);
  CHECK(b.bias == 0.0);
  CHECK(b.mse == 0.0);
  const BiasMse none = bias_mse(std::vector<double>{}, 1.0);
  CHECK(std::isnan(none.bias));
  CHECK(std::isnan(none.mse));
  const std::vector<double> two{1.0, 3.0};
  CHECK(bias_mse(two, 1.0).bias == 1.0);
  CHECK(bias_mse(two, 1.0).mse == 2.0);
}

TEST_CASE("method names round-trip") {
  for (const char* m : {"mm", "mle", "bayes_jeffreys", "bayes_power:0.5", "bayes_power:2"})
    CHECK(StudyMethod::parse(m).name() == m);
  CHECK(StudyMethod::parse("bayes_power:0.5").epsilon == 0.5);
  for (const char* m : {"", "bayes", "bayes_power:", "bayes_power:x", "MLE"})
    CHECK_THROWS_AS(StudyMethod::parse(m), DomainError);
}

TEST_CASE("study configuration validation") {
  StudyConfig cfg = small_study(1);
  CHECK_NOTHROW(cfg.validate());
  cfg.n_grid = {2, 10};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_study(1);
  cfg.methods.push_back(StudyMethod::parse("bayes_power:-1"));
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_study(1);
  cfg.methods = {StudyMethod::parse("bayes_power:6")};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_study(1);
  cfg.replications = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_study(1);
  cfg.methods.clear();
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_study(1);
  cfg.level = 1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_study(1);
  cfg.mcmc.thin = 0;
  CHECK_THROWS_AS(run_study(cfg), DomainError);
}

TEST_CASE("study table invariants and thread-count independence") {
  const StudyTable a = run_study(small_study(1));
  const StudyTable b = run_study(small_study(4));
  const StudyTable again = run_study(small_study(1));
  REQUIRE(a.cells.size() == 3 * 2 * 2);
  REQUIRE(b.cells.size() == a.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const StudyCell& c = a.cells[i];
    CAPTURE(c.method.name());
    CAPTURE(c.n);
    CAPTURE(c.parameter);
    CHECK(c.estimates == b.cells[i].estimates);
    CHECK(c.estimates == again.cells[i].estimates);
    CHECK(c.bias == b.cells[i].bias);
    CHECK(c.mse == b.cells[i].mse);
    CHECK(c.cp == b.cells[i].cp);
    CHECK(c.failures == b.cells[i].failures);
    CHECK(c.used == c.estimates.size());
    CHECK(c.used + c.failures >= 20);
    REQUIRE(c.used > 1);
    const double truth = c.parameter == "eta" ? 6.0 : 2.0;
    double mean = 0.0, var = 0.0;
    for (double e : c.estimates) mean += e;
    mean /= static_cast<double>(c.used);
    for (double e : c.estimates) var += (e - mean) * (e - mean);
    var /= static_cast<double>(c.used);
    CHECK(c.bias == doctest::Approx(mean - truth).epsilon(1e-12));
    CHECK(std::abs(c.mse - (c.bias * c.bias + var)) <= 1e-12 * std::max(1.0, c.mse));
    CHECK(c.mse >= c.bias * c.bias);
    if (c.method.kind == StudyMethodKind::kMoments) {
      CHECK_FALSE(c.cp.has_value());
    } else {
      REQUIRE(c.cp.has_value());
      CHECK(*c.cp >= 0.0);
      CHECK(*c.cp <= 1.0);
    }
  }
  CHECK(&a.find(StudyMethodKind::kBayesJeffreys, 30, "alpha") != nullptr);
  CHECK_THROWS_AS(a.find(StudyMethodKind::kBayesPower, 30, "alpha"), DomainError);
}

TEST_CASE("outage curve edges, monotonicity and band nesting") {
  const Chain& c = fixture_chain();
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.25 * i);
  grid.push_back(200.0);
  const OutageCurve wide = outage_curve(c, grid, 0.95, 2);
  const OutageCurve narrow = outage_curve(c, grid, 0.5, 1);
  REQUIRE(wide.points.size() == grid.size());
  CHECK(wide.failed_draws == 0);
  CHECK(wide.points.front().point == 0.0);
  CHECK(wide.points.front().lo == 0.0);
  CHECK(wide.points.front().hi == 0.0);
  CHECK(std::abs(wide.points.back().point - 1.0) < 1e-6);
  CHECK(std::abs(wide.points.back().lo - 1.0) < 1e-6);
  CHECK(std::abs(wide.points.back().hi - 1.0) < 1e-6);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& w = wide.points[i];
    const auto& n = narrow.points[i];
    CHECK(w.lo <= n.lo);
    CHECK(n.hi <= w.hi);
    CHECK(w.lo <= w.hi);
    CHECK(n.point == w.point);
    if (i > 0) {
      CHECK(w.point >= wide.points[i - 1].point);
      CHECK(w.lo >= wide.points[i - 1].lo);
      CHECK(w.hi >= wide.points[i - 1].hi);
    }
  }
  const OutageCurve again = outage_curve(c, grid, 0.95, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(again.points[i].lo == wide.points[i].lo);
    CHECK(again.points[i].hi == wide.points[i].hi);
  }
}

TEST_CASE("outage curve input checks") {
  const Chain& c = fixture_chain();
  const std::vector<double> ok{0.0, 1.0};
  CHECK_THROWS_AS(outage_curve(Chain{}, ok, 0.95), DomainError);
  CHECK_THROWS_AS(outage_curve(c, std::vector<double>{}, 0.95), DomainError);
  CHECK_THROWS_AS(outage_curve(c, std::vector<double>{2.0, 1.0}, 0.95), DomainError);
  CHECK_THROWS_AS(outage_curve(c, std::vector<double>{-1.0, 1.0}, 0.95), DomainError);
  CHECK_THROWS_AS(outage_curve(c, ok, 1.5), DomainError);
}
