#pragma once

#include <random>
#include <string>
#include <vector>

#include "fleetplan/fleet_model.hpp"

namespace fleetplan::testing {

inline ServerSpec row(std::string id, int year, int dimms, double cpu_cost, double dimm_cost,
                      double qps, double power, double epa, double gpa, double area,
                      double cps_dram, double cap_dram) {
  ServerSpec s;
  s.id = std::move(id);
  s.entry_year = year;
  s.cpu_count = 1;
  s.dimm_count = dimms;
  s.cpu_cost = cpu_cost;
  s.dimm_cost = dimm_cost;
  s.qps = qps;
  s.power_w = power;
  s.utilization_pct = 100;
  s.ci_op = 0.23;
  s.nr_ics = 1;
  s.kr_packaging = 0.15;
  s.yield_fraction = 0.5;
  s.ci_fab = 0.295;
  s.epa = epa;
  s.gpa = gpa;
  s.mpa = 0.5;
  s.die_area_cm2 = area;
  s.cps_dram = cps_dram;
  s.cap_dram_gb = cap_dram;
  return s;
}

// The eleven single-CPU servers of the study, typed in by hand so the tests
// do not depend on the CSV reader.
inline std::vector<ServerSpec> table1_specs() {
  return {
      row("A", 2010, 2, 589, 20, 278441, 130, 0.41, 0.14, 2.96, 0.6, 4),
      row("B", 2011, 2, 294, 30, 295443, 58, 0.793, 0.17, 2.16, 0.6, 8),
      row("C", 2012, 2, 294, 40, 416999, 59.5, 1.08, 0.18, 1.6, 0.315, 8),
      row("D", 2013, 2, 294, 40, 491887, 58.5, 1.08, 0.18, 1.6, 0.315, 8),
      row("E", 2014, 4, 189, 30, 322278, 131, 1.08, 0.18, 1.77, 0.315, 16),
      row("F", 2015, 2, 294, 40, 508794, 60, 1.08, 0.18, 1.6, 0.315, 16),
      row("G", 2016, 2, 294, 50, 474667, 47.9, 1.2, 0.2, 1.22, 0.065, 16),
      row("H", 2017, 2, 250, 40, 586973, 56.1, 1.2, 0.2, 1.22, 0.065, 16),
      row("I", 2018, 2, 362, 35, 655699, 71.7, 1.2, 0.2, 1.54, 0.065, 16),
      row("J", 2019, 2, 362, 40, 695687, 61.8, 1.2, 0.2, 1.54, 0.065, 16),
      row("K", 2021, 2, 539, 55, 655851, 55.5, 1.2, 0.2, 2.76, 0.065, 16),
  };
}

inline const Fleet& table1() {
  static const Fleet fleet(table1_specs());
  return fleet;
}

inline const ServerSpec& server(const std::string& id) { return *table1().find(id); }

inline UpgradePlan plan(std::initializer_list<PlanSegment> segments) {
  return UpgradePlan{std::vector<PlanSegment>(segments)};
}

// Plan A 1y, B 2y, D 4y, H 5y over 2010-2022.
inline UpgradePlan paper_optimum() {
  return plan({{"A", 2010, 1}, {"B", 2011, 2}, {"D", 2013, 4}, {"H", 2017, 5}});
}

// Random fleet within ServerSpec invariants. At least one server is available
// at cfg.start_year.
inline Fleet random_fleet(std::mt19937_64& rng, int max_servers, const EconomicConfig& cfg) {
  std::uniform_int_distribution<int> count(1, max_servers);
  std::uniform_int_distribution<int> year(cfg.start_year - 1, cfg.end_year - 1);
  std::uniform_int_distribution<int> small(1, 4);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  const int n = count(rng);
  std::vector<ServerSpec> servers;
  for (int i = 0; i < n; ++i) {
    ServerSpec s;
    s.id = std::string(1, static_cast<char>('P' + i));
    s.entry_year = i == 0 ? cfg.start_year : year(rng);
    s.cpu_count = small(rng);
    s.dimm_count = small(rng) - 1;
    s.cpu_cost = 100 + 900 * unit(rng);
    s.dimm_cost = 10 + 90 * unit(rng);
    s.qps = 1e5 + 9e5 * unit(rng);
    s.power_w = 20 + 200 * unit(rng);
    s.utilization_pct = 100;
    s.ci_op = 0.5 * unit(rng);
    s.nr_ics = small(rng);
    s.kr_packaging = 0.3 * unit(rng);
    s.yield_fraction = unit(rng);
    s.ci_fab = 0.5 * unit(rng);
    s.epa = 2 * unit(rng);
    s.gpa = 0.5 * unit(rng);
    s.mpa = unit(rng);
    s.die_area_cm2 = 4 * unit(rng);
    s.cps_dram = unit(rng);
    s.cap_dram_gb = 32 * unit(rng);
    servers.push_back(std::move(s));
  }
  return Fleet(std::move(servers));
}

}  // namespace fleetplan::testing
