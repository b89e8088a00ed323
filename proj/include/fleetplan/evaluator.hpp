#pragma once

#include <optional>
#include <stdexcept>

#include "fleetplan/fleet_model.hpp"
#include "fleetplan/metric_models.hpp"

namespace fleetplan {

/// Contribution of one canonical segment to the plan totals. CAPEX and
/// embodied carbon are charged once per segment, which is how reusing a
/// server across consecutive cycles is billed only once.
struct SegmentTotals {
  double queries = 0.0;  // qps * years
  double tco = 0.0;
  double co2 = 0.0;
};

SegmentTotals segment_totals(const ServerSpec& server, int duration_years,
                             const EconomicConfig& cfg);

/// Running sums over segments, accumulated left to right. The solver's
/// search and evaluate_plan both go through this type so that a plan scores
/// bit-identically on either path.
struct PlanTotals {
  double queries = 0.0;
  double tco = 0.0;
  double co2 = 0.0;

  PlanTotals plus(const SegmentTotals& s) const {
    return {queries + s.queries, tco + s.tco, co2 + s.co2};
  }
};

struct RatioMetrics {
  double qps = 0.0;
  double tco = 0.0;
  double co2 = 0.0;
  double qps_per_tco = 0.0;
  double qps_per_co2 = 0.0;
  double qps_per_tco_x_co2 = 0.0;

  bool operator==(const RatioMetrics&) const = default;
};

inline RatioMetrics finish(const PlanTotals& totals, int horizon_years) {
  RatioMetrics m;
  m.qps = totals.queries / horizon_years;
  m.tco = totals.tco;
  m.co2 = totals.co2;
  m.qps_per_tco = m.qps / m.tco;
  m.qps_per_co2 = m.qps / m.co2;
  m.qps_per_tco_x_co2 = m.qps / (m.tco * m.co2);
  return m;
}

/// Same value as objective(evaluate_plan(...), kind) for the same totals.
inline double objective_of(const PlanTotals& totals, int horizon_years, MetricKind kind) {
  const double qps = totals.queries / horizon_years;
  switch (kind) {
    case MetricKind::kQpsPerTco:
      return qps / totals.tco;
    case MetricKind::kQpsPerCo2:
      return qps / totals.co2;
    case MetricKind::kQpsPerTcoXCo2:
      return qps / (totals.tco * totals.co2);
  }
  return 0.0;
}

struct PlanEvaluation {
  UpgradePlan plan;  // canonical
  double qps = 0.0;
  double tco = 0.0;
  double co2 = 0.0;
  double metric_qps_per_tco = 0.0;
  double metric_qps_per_co2 = 0.0;
  double metric_qps_per_tco_x_co2 = 0.0;
  int n_upgrades = 0;
  std::optional<RatioMetrics> normalized;

  bool operator==(const PlanEvaluation&) const = default;
};

/// Canonicalizes, validates and scores a plan. Throws PlanValidationError
/// listing every violation when the plan is invalid.
PlanEvaluation evaluate_plan(const UpgradePlan& plan, const Fleet& fleet,
                             const EconomicConfig& cfg);

class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Copy of eval with .normalized set to eval / baseline field by field.
/// Throws NormalizationError when any baseline field is not strictly positive.
PlanEvaluation normalize(const PlanEvaluation& eval, const PlanEvaluation& baseline);

/// The plan running cfg.baseline_server_id for the whole horizon.
UpgradePlan baseline_plan(const EconomicConfig& cfg);

/// Evaluation of baseline_plan, or nullopt when the baseline server is not in
/// the fleet or not available at start_year.
std::optional<PlanEvaluation> baseline_evaluation(const Fleet& fleet, const EconomicConfig& cfg);

/// Larger is better.
double objective(const PlanEvaluation& eval, MetricKind kind);

}  // namespace fleetplan
