#include <doctest.h>

#include <random>

#include "fleetplan/metric_models.hpp"
#include "support.hpp"

using namespace fleetplan;
using fleetplan::testing::server;
using fleetplan::testing::table1;
using doctest::Approx;

// Expected values below were computed with exact rational arithmetic from the
// catalog rows (see the hand oracle in the test notes of each case).

TEST_CASE("capex sums CPU and DIMM prices") {
  CHECK(capex(server("A")) == 629.0);  // 589 + 2*20
  CHECK(capex(server("H")) == 330.0);  // 250 + 2*40
  ServerSpec free = server("A");
  free.cpu_cost = 0;
  free.dimm_cost = 0;
  CHECK(capex(free) == 0.0);
}

TEST_CASE("segment energy") {
  const EconomicConfig cfg;
  CHECK(segment_energy(server("A"), 1, cfg) == Approx(1138.8).epsilon(1e-12));   // 0.130*8760
  CHECK(segment_energy(server("B"), 2, cfg) == Approx(1016.16).epsilon(1e-12));  // 0.058*8760*2
  CHECK(segment_energy(server("K"), 0, cfg) == 0.0);
}

TEST_CASE("opex") {
  EconomicConfig cfg;
  CHECK(opex(server("A"), 1, cfg) == Approx(113.88).epsilon(1e-12));
  CHECK(opex(server("H"), 5, cfg) == Approx(245.718).epsilon(1e-12));
  cfg.energy_price = 0.0;
  CHECK(opex(server("H"), 5, cfg) == 0.0);
}

TEST_CASE("embodied carbon") {
  // (0.295*0.41 + 0.14 + 0.5) * 2.96 / 0.5 + 0.15 + 2*0.6*4
  CHECK(embodied_co2(server("A")) == Approx(9.454824).epsilon(1e-12));
  // (0.295*1.2 + 0.2 + 0.5) * 1.22 / 0.5 + 0.15 + 2*0.065*16
  CHECK(embodied_co2(server("G")) == Approx(4.80176).epsilon(1e-12));

  ServerSpec bare = server("A");
  bare.die_area_cm2 = 0;
  bare.cps_dram = 0;
  bare.nr_ics = 3;
  CHECK(embodied_co2(bare) == Approx(3 * 0.15).epsilon(1e-15));

  // Capacity read as the server total: 4.504824 + 0.15 + 0.6*4.
  CHECK(embodied_co2(server("A"), DramCapacity::kPerServer) == Approx(7.054824).epsilon(1e-12));

  ServerSpec dual = server("A");
  dual.cpu_count = 2;
  CHECK(embodied_co2(dual) == Approx(2 * (4.504824 + 0.15) + 4.8).epsilon(1e-12));
}

TEST_CASE("operational carbon") {
  const EconomicConfig cfg;
  CHECK(operational_co2(server("A"), 1, cfg) == Approx(261.924).epsilon(1e-12));
  CHECK(operational_co2(server("D"), 4, cfg) == Approx(471.4632).epsilon(1e-12));
  CHECK(operational_co2(server("D"), 0, cfg) == 0.0);
}

TEST_CASE("segment cost and carbon bundles") {
  const EconomicConfig cfg;
  const SegmentCost c = segment_cost(server("H"), 5, cfg);
  CHECK(c.capex == 330.0);
  CHECK(c.opex == c.energy_kwh * cfg.energy_price);
  const SegmentCarbon k = segment_carbon(server("A"), 1, cfg);
  CHECK(k.embodied_kg == embodied_co2(server("A")));
  CHECK(k.operational_kg == operational_co2(server("A"), 1, cfg));
}

TEST_CASE("aggregate qps") {
  const EconomicConfig cfg;
  CHECK(aggregate_qps(testing::plan({{"A", 2010, 12}}), table1(), cfg) == 278441.0);
  // (278441 + 2*295443 + 4*491887 + 5*586973) / 12
  CHECK(aggregate_qps(testing::paper_optimum(), table1(), cfg) ==
        Approx(5771740.0 / 12.0).epsilon(1e-12));
  // Equal durations average the two throughputs.
  CHECK(aggregate_qps(testing::plan({{"A", 2010, 6}, {"G", 2016, 6}}), table1(), cfg) ==
        Approx((278441.0 + 474667.0) / 2).epsilon(1e-15));
}

TEST_CASE("metric model properties") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dur(0, 20);
  std::uniform_real_distribution<double> factor(0.1, 10.0);
  EconomicConfig cfg;
  for (const auto& s : table1().servers()) {
    for (int i = 0; i < 20; ++i) {
      const int d1 = dur(rng);
      const int d2 = dur(rng);
      // Linear in duration.
      CHECK(opex(s, d1 + d2, cfg) == Approx(opex(s, d1, cfg) + opex(s, d2, cfg)).epsilon(1e-12));
      CHECK(operational_co2(s, d1 + d2, cfg) ==
            Approx(operational_co2(s, d1, cfg) + operational_co2(s, d2, cfg)).epsilon(1e-12));
      // Linear in power.
      ServerSpec doubled = s;
      doubled.power_w *= 2;
      CHECK(opex(doubled, d1, cfg) == Approx(2 * opex(s, d1, cfg)).epsilon(1e-12));
      CHECK(operational_co2(doubled, d1, cfg) ==
            Approx(2 * operational_co2(s, d1, cfg)).epsilon(1e-12));
      // Price scaling touches only opex.
      const double k = factor(rng);
      EconomicConfig scaled = cfg;
      scaled.energy_price *= k;
      CHECK(opex(s, d1, scaled) == Approx(k * opex(s, d1, cfg)).epsilon(1e-12));
      CHECK(operational_co2(s, d1, scaled) == operational_co2(s, d1, cfg));
      CHECK(opex(s, d1, cfg) >= 0.0);
    }
    CHECK(capex(s) > 0.0);
    CHECK(embodied_co2(s) > 0.0);
  }
}

TEST_CASE("aggregate qps stays within the segment range") {
  std::mt19937_64 rng(5);
  const EconomicConfig cfg;
  for (int i = 0; i < 300; ++i) {
    UpgradePlan p;
    int year = cfg.start_year;
    double lo = 1e300, hi = 0;
    while (year < cfg.end_year) {
      std::uniform_int_distribution<int> dur(1, cfg.end_year - year);
      std::vector<const ServerSpec*> avail;
      for (const auto& s : table1().servers()) {
        if (s.entry_year <= year) avail.push_back(&s);
      }
      std::uniform_int_distribution<std::size_t> pick(0, avail.size() - 1);
      const ServerSpec* s = avail[pick(rng)];
      const int d = dur(rng);
      p.segments.push_back({s->id, year, d});
      lo = std::min(lo, s->qps);
      hi = std::max(hi, s->qps);
      year += d;
    }
    const double q = aggregate_qps(p, table1(), cfg);
    CHECK(q >= lo * (1 - 1e-15));
    CHECK(q <= hi * (1 + 1e-15));
  }
}
