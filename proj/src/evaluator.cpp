#include "fleetplan/evaluator.hpp"

#include <cmath>

namespace fleetplan {

SegmentTotals segment_totals(const ServerSpec& server, int duration_years,
                             const EconomicConfig& cfg) {
  const SegmentCost cost = segment_cost(server, duration_years, cfg);
  const SegmentCarbon carbon = segment_carbon(server, duration_years, cfg);
  return {server.qps * duration_years, cost.capex + cost.opex,
          carbon.embodied_kg + carbon.operational_kg};
}

PlanEvaluation evaluate_plan(const UpgradePlan& plan, const Fleet& fleet,
                             const EconomicConfig& cfg) {
  require_valid(cfg);
  UpgradePlan canonical = canonicalize(plan);
  PlanValidation validation = validate_plan(canonical, fleet, cfg);
  if (!validation.ok()) throw PlanValidationError(std::move(validation));

  PlanTotals totals;
  for (const auto& seg : canonical.segments) {
    totals = totals.plus(segment_totals(*fleet.find(seg.server_id), seg.duration_years, cfg));
  }
  const RatioMetrics m = finish(totals, cfg.horizon());

  PlanEvaluation eval;
  eval.n_upgrades = static_cast<int>(canonical.segments.size());
  eval.plan = std::move(canonical);
  eval.qps = m.qps;
  eval.tco = m.tco;
  eval.co2 = m.co2;
  eval.metric_qps_per_tco = m.qps_per_tco;
  eval.metric_qps_per_co2 = m.qps_per_co2;
  eval.metric_qps_per_tco_x_co2 = m.qps_per_tco_x_co2;
  return eval;
}

PlanEvaluation normalize(const PlanEvaluation& eval, const PlanEvaluation& baseline) {
  auto ratio = [](double value, double base, const char* name) {
    if (!(std::isfinite(base) && base > 0.0)) {
      throw NormalizationError(std::string("baseline ") + name + " must be strictly positive");
    }
    return value / base;
  };
  PlanEvaluation out = eval;
  RatioMetrics n;
  n.qps = ratio(eval.qps, baseline.qps, "qps");
  n.tco = ratio(eval.tco, baseline.tco, "tco");
  n.co2 = ratio(eval.co2, baseline.co2, "co2");
  n.qps_per_tco = ratio(eval.metric_qps_per_tco, baseline.metric_qps_per_tco, "qps_per_tco");
  n.qps_per_co2 = ratio(eval.metric_qps_per_co2, baseline.metric_qps_per_co2, "qps_per_co2");
  n.qps_per_tco_x_co2 =
      ratio(eval.metric_qps_per_tco_x_co2, baseline.metric_qps_per_tco_x_co2, "qps_per_tco_x_co2");
  out.normalized = n;
  return out;
}

UpgradePlan baseline_plan(const EconomicConfig& cfg) {
  return UpgradePlan{{PlanSegment{cfg.baseline_server_id, cfg.start_year, cfg.horizon()}}};
}

std::optional<PlanEvaluation> baseline_evaluation(const Fleet& fleet, const EconomicConfig& cfg) {
  const UpgradePlan plan = baseline_plan(cfg);
  if (!validate_plan(plan, fleet, cfg).ok()) return std::nullopt;
  return evaluate_plan(plan, fleet, cfg);
}

double objective(const PlanEvaluation& eval, MetricKind kind) {
  switch (kind) {
    case MetricKind::kQpsPerTco:
      return eval.metric_qps_per_tco;
    case MetricKind::kQpsPerCo2:
      return eval.metric_qps_per_co2;
    case MetricKind::kQpsPerTcoXCo2:
      return eval.metric_qps_per_tco_x_co2;
  }
  return 0.0;
}

}  // namespace fleetplan
