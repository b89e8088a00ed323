#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fleetplan {

/// One server model from a catalog: purchase costs, measured power and
/// throughput, and the parameters of the embodied-carbon (ACT) model.
struct ServerSpec {
  std::string id;
  int entry_year = 0;
  int cpu_count = 1;
  int dimm_count = 0;
  double cpu_cost = 0.0;   // USD per CPU
  double dimm_cost = 0.0;  // USD per DIMM
  double qps = 0.0;
  double power_w = 0.0;
  double utilization_pct = 100.0;
  double ci_op = 0.0;  // kgCO2/kWh of the grid powering the server
  int nr_ics = 0;
  double kr_packaging = 0.0;  // kgCO2 per packaged IC
  double yield_fraction = 1.0;
  double ci_fab = 0.0;  // kgCO2/kWh of the fab energy
  double epa = 0.0;     // kWh/cm2
  double gpa = 0.0;     // kgCO2/cm2
  double mpa = 0.0;     // kgCO2/cm2
  double die_area_cm2 = 0.0;
  double cps_dram = 0.0;  // kgCO2/GB
  double cap_dram_gb = 0.0;

  bool operator==(const ServerSpec&) const = default;
};

/// Returns one message per violated invariant; empty for a valid spec.
std::vector<std::string> check_server(const ServerSpec& server);

class FleetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable catalog of server models, sorted by (entry_year, id).
class Fleet {
 public:
  /// Throws FleetError on an empty list, duplicate ids or invalid specs.
  explicit Fleet(std::vector<ServerSpec> servers);

  std::span<const ServerSpec> servers() const { return servers_; }
  std::size_t size() const { return servers_.size(); }
  const ServerSpec& operator[](std::size_t i) const { return servers_[i]; }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const ServerSpec* find(std::string_view id) const;

  bool operator==(const Fleet&) const = default;

 private:
  std::vector<ServerSpec> servers_;
};

/// How the catalog's DRAM capacity column is read when computing DRAM
/// embodied carbon.
enum class DramCapacity { kPerDimm, kPerServer };

struct EconomicConfig {
  int start_year = 2010;
  int end_year = 2022;
  double energy_price = 0.10;  // USD per kWh
  double hours_per_year = 8760.0;
  std::string baseline_server_id = "A";
  // Only allow upgrades to a model with a strictly newer entry year.
  bool monotone_only = false;
  DramCapacity dram_capacity = DramCapacity::kPerDimm;

  int horizon() const { return end_year - start_year; }

  bool operator==(const EconomicConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> check_config(const EconomicConfig& cfg);
/// Throws ConfigError listing every violation.
void require_valid(const EconomicConfig& cfg);

enum class MetricKind { kQpsPerTco, kQpsPerCo2, kQpsPerTcoXCo2 };

/// "qps-per-tco", "qps-per-co2", "qps-per-tco-co2".
std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric_kind(std::string_view text);

struct PlanSegment {
  std::string server_id;
  int start_year = 0;
  int duration_years = 1;

  int end_year() const { return start_year + duration_years; }
  bool operator==(const PlanSegment&) const = default;
};

struct UpgradePlan {
  std::vector<PlanSegment> segments;

  bool operator==(const UpgradePlan&) const = default;
};

struct PlanViolation {
  std::optional<std::size_t> segment;  // empty for whole-plan violations
  std::string reason;
};

struct PlanValidation {
  std::vector<PlanViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string message() const;
};

class PlanValidationError : public std::runtime_error {
 public:
  explicit PlanValidationError(PlanValidation validation);
  const PlanValidation& validation() const { return validation_; }

 private:
  PlanValidation validation_;
};

/// Checks that the plan covers [start_year, end_year) with contiguous
/// segments, each using a known server already released at the segment's
/// start. Consecutive segments may repeat a server (that is a continuation,
/// see canonicalize). With cfg.monotone_only, every switch must move to a
/// strictly newer entry year.
PlanValidation validate_plan(const UpgradePlan& plan, const Fleet& fleet,
                             const EconomicConfig& cfg);

/// Merges consecutive same-server segments. Idempotent.
UpgradePlan canonicalize(const UpgradePlan& plan);

bool is_canonical(const UpgradePlan& plan);

/// "A:2010,B:2011,D:2013,H:2017".
std::string format_plan_string(const UpgradePlan& plan);

}  // namespace fleetplan
