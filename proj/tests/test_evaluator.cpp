#include <doctest.h>

#include <random>

#include "fleetplan/evaluator.hpp"
#include "fleetplan/solver.hpp"
#include "oracles/reference.hpp"
#include "support.hpp"

using namespace fleetplan;
using fleetplan::testing::plan;
using fleetplan::testing::table1;
using doctest::Approx;

// Exact-rational reference values (Table 1 rows, default economics).
constexpr double kAllATco = 1995.56;
constexpr double kAllACo2 = 3152.542824;
constexpr double kAllAMetric = 0.044259591371349265;
constexpr double kOptimumTco = 2353.198;
constexpr double kOptimumCo2 = 1568.5525032;
constexpr double kOptimumQps = 5771740.0 / 12.0;
constexpr double kOptimumMetric = 0.13030707081918574;
constexpr double kOptimumNormalizedMetric = 2.9441544031863325;

TEST_CASE("evaluate the all-A baseline") {
  const auto e = evaluate_plan(plan({{"A", 2010, 12}}), table1(), EconomicConfig{});
  CHECK(e.tco == Approx(kAllATco).epsilon(1e-12));
  CHECK(e.co2 == Approx(kAllACo2).epsilon(1e-12));
  CHECK(e.qps == 278441.0);
  CHECK(e.metric_qps_per_tco_x_co2 == Approx(kAllAMetric).epsilon(1e-12));
  CHECK(e.n_upgrades == 1);
}

TEST_CASE("evaluate the study's optimal plan") {
  const auto e = evaluate_plan(testing::paper_optimum(), table1(), EconomicConfig{});
  CHECK(e.tco == Approx(kOptimumTco).epsilon(1e-12));
  CHECK(e.co2 == Approx(kOptimumCo2).epsilon(1e-12));
  CHECK(e.qps == Approx(kOptimumQps).epsilon(1e-12));
  CHECK(e.metric_qps_per_tco_x_co2 == Approx(kOptimumMetric).epsilon(1e-12));
  CHECK(e.metric_qps_per_tco_x_co2 == e.qps / (e.tco * e.co2));
  CHECK(e.n_upgrades == 4);
}

TEST_CASE("reuse is charged once") {
  const EconomicConfig cfg;
  const auto split = evaluate_plan(plan({{"A", 2010, 1}, {"A", 2011, 11}}), table1(), cfg);
  const auto whole = evaluate_plan(plan({{"A", 2010, 12}}), table1(), cfg);
  CHECK(split == whole);
}

TEST_CASE("invalid plans raise with every violation") {
  try {
    evaluate_plan(plan({{"B", 2010, 3}, {"Q", 2013, 3}}), table1(), EconomicConfig{});
    FAIL("expected PlanValidationError");
  } catch (const PlanValidationError& e) {
    CHECK(e.validation().violations.size() == 3);
  }
}

TEST_CASE("normalize") {
  const EconomicConfig cfg;
  const auto base = evaluate_plan(plan({{"A", 2010, 12}}), table1(), cfg);
  const auto self = normalize(base, base);
  REQUIRE(self.normalized);
  CHECK(self.normalized->qps == 1.0);
  CHECK(self.normalized->tco == 1.0);
  CHECK(self.normalized->co2 == 1.0);
  CHECK(self.normalized->qps_per_tco == 1.0);
  CHECK(self.normalized->qps_per_co2 == 1.0);
  CHECK(self.normalized->qps_per_tco_x_co2 == 1.0);

  const auto opt = normalize(evaluate_plan(testing::paper_optimum(), table1(), cfg), base);
  CHECK(opt.normalized->qps_per_tco_x_co2 == Approx(kOptimumNormalizedMetric).epsilon(1e-12));

  PlanEvaluation pricier = base;
  pricier.tco *= 2;
  pricier.metric_qps_per_tco = pricier.qps / pricier.tco;
  CHECK(normalize(pricier, base).normalized->qps_per_tco == Approx(0.5).epsilon(1e-15));

  PlanEvaluation broken = base;
  broken.co2 = 0;
  CHECK_THROWS_AS(normalize(base, broken), NormalizationError);
}

TEST_CASE("objective selects the ratio") {
  const auto e = evaluate_plan(plan({{"A", 2010, 12}}), table1(), EconomicConfig{});
  CHECK(objective(e, MetricKind::kQpsPerTco) ==
        Approx(278441.0 / kAllATco).epsilon(1e-12));  // ~139.53
  CHECK(objective(e, MetricKind::kQpsPerCo2) ==
        Approx(278441.0 / kAllACo2).epsilon(1e-12));  // ~88.32
  CHECK(objective(e, MetricKind::kQpsPerTcoXCo2) == e.qps / (e.tco * e.co2));
}

TEST_CASE("baseline evaluation follows the config") {
  EconomicConfig cfg;
  REQUIRE(baseline_evaluation(table1(), cfg));
  CHECK(baseline_evaluation(table1(), cfg)->plan == plan({{"A", 2010, 12}}));
  cfg.baseline_server_id = "C";
  CHECK_FALSE(baseline_evaluation(table1(), cfg));
  cfg.baseline_server_id = "nope";
  CHECK_FALSE(baseline_evaluation(table1(), cfg));
}

TEST_CASE("collapse invariance on random splits") {
  std::mt19937_64 rng(17);
  EconomicConfig cfg;
  for (int i = 0; i < 300; ++i) {
    const auto& s = table1()[rng() % table1().size()];
    cfg.start_year = s.entry_year;
    cfg.end_year = s.entry_year + 2 + static_cast<int>(rng() % 12);
    const int d1 = 1 + static_cast<int>(rng() % (cfg.horizon() - 1));
    const auto split = evaluate_plan(
        plan({{s.id, cfg.start_year, d1}, {s.id, cfg.start_year + d1, cfg.horizon() - d1}}),
        table1(), cfg);
    const auto whole = evaluate_plan(plan({{s.id, cfg.start_year, cfg.horizon()}}), table1(), cfg);
    CHECK(split == whole);
  }
}

TEST_CASE("totals match a year-by-year accumulation") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    EconomicConfig cfg;
    cfg.end_year = cfg.start_year + 1 + static_cast<int>(rng() % 5);
    cfg.energy_price = 0.01 * (1 + rng() % 40);
    cfg.dram_capacity = trial % 2 ? DramCapacity::kPerDimm : DramCapacity::kPerServer;
    const Fleet fleet = testing::random_fleet(rng, 4, cfg);
    for (const auto& p : oracle::naive_plans(fleet, cfg)) {
      const auto e = evaluate_plan(p, fleet, cfg);
      const auto y = oracle::per_year_totals(p, fleet, cfg);
      CHECK(e.tco == Approx(y.tco).epsilon(1e-12));
      CHECK(e.co2 == Approx(y.co2).epsilon(1e-12));
      CHECK(e.qps == Approx(y.qps).epsilon(1e-12));
    }
  }
}

TEST_CASE("carbon ranking does not depend on energy price") {
  EconomicConfig cheap;
  cheap.end_year = 2016;
  EconomicConfig dear = cheap;
  dear.energy_price *= 3.7;
  const auto a = solve_global(table1(), cheap, MetricKind::kQpsPerCo2, 50, {1});
  const auto b = solve_global(table1(), dear, MetricKind::kQpsPerCo2, 50, {1});
  REQUIRE(a.ranked.size() == b.ranked.size());
  for (std::size_t i = 0; i < a.ranked.size(); ++i) CHECK(a.ranked[i].plan == b.ranked[i].plan);
}

TEST_CASE("more throughput raises every objective") {
  const EconomicConfig cfg;
  auto specs = testing::table1_specs();
  specs[3].qps *= 1.01;  // D
  const Fleet faster(specs);
  const auto before = evaluate_plan(testing::paper_optimum(), table1(), cfg);
  const auto after = evaluate_plan(testing::paper_optimum(), faster, cfg);
  CHECK(after.metric_qps_per_tco > before.metric_qps_per_tco);
  CHECK(after.metric_qps_per_co2 > before.metric_qps_per_co2);
  CHECK(after.metric_qps_per_tco_x_co2 > before.metric_qps_per_tco_x_co2);
}
