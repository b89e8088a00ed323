#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fleetplan/evaluator.hpp"
#include "fleetplan/fleet_model.hpp"

namespace fleetplan {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverReport {
  std::vector<PlanEvaluation> ranked;  // best first
  std::uint64_t total_plans = 0;
  MetricKind objective_kind = MetricKind::kQpsPerTcoXCo2;
  EconomicConfig config;
  // Cycle length of each ranked entry for local-plan reports; empty otherwise.
  std::vector<int> cycle_years;
};

/// Strict total order used for every ranking: higher objective first, then
/// fewer upgrades, then the lexicographically smaller plan string.
bool ranks_before(const PlanEvaluation& a, const PlanEvaluation& b, MetricKind kind);

/// Visits every canonical plan exactly once. Order: segment-duration
/// compositions of the horizon (lexicographic), then server choices
/// (lexicographic in fleet order). Throws SolverError when no server is
/// available at start_year.
void enumerate_global(const Fleet& fleet, const EconomicConfig& cfg,
                      const std::function<void(const UpgradePlan&)>& visit);

/// Number of canonical plans, from a recurrence over (year, last server).
/// Throws SolverError on overflow or when no server is available at start_year.
std::uint64_t count_plans(const Fleet& fleet, const EconomicConfig& cfg);

struct SearchOptions {
  // 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// Scores every canonical plan and keeps the top_n under ranks_before. The
/// result does not depend on the number of workers.
SolverReport solve_global(const Fleet& fleet, const EconomicConfig& cfg, MetricKind kind,
                          std::size_t top_n, SearchOptions options = {});

/// 1-based position the plan would take in the full ranking.
std::uint64_t rank_of(const UpgradePlan& plan, const Fleet& fleet, const EconomicConfig& cfg,
                      MetricKind kind, SearchOptions options = {});

struct LocalPlanSpec {
  int cycle_years = 1;
  MetricKind greedy_metric = MetricKind::kQpsPerTcoXCo2;
};

/// Fixed-cycle plan built without knowledge of future releases: at each
/// upgrade year the server maximizing greedy_metric over the coming cycle
/// alone is installed. Keeping the installed server costs no CAPEX or
/// embodied carbon. Ties go to the newer entry year, then the smaller id.
PlanEvaluation solve_local(const Fleet& fleet, const EconomicConfig& cfg, LocalPlanSpec spec);

/// Cycle lengths that divide the horizon, ascending.
std::vector<int> admissible_cycles(const EconomicConfig& cfg);

/// solve_local for every admissible cycle, ranked by the greedy metric.
SolverReport solve_all_local(const Fleet& fleet, const EconomicConfig& cfg, MetricKind kind);

}  // namespace fleetplan
