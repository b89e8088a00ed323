#include "fleetplan/fleet_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace fleetplan {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](unsigned char c) {
    return c == ',' || c == ':' || std::isspace(c) != 0;
  });
}

}  // namespace

std::vector<std::string> check_server(const ServerSpec& s) {
  std::vector<std::string> out;
  auto need = [&out](bool cond, const char* msg) {
    if (!cond) out.emplace_back(msg);
  };
  need(valid_id(s.id), "id must be nonempty without ',', ':' or whitespace");
  need(s.cpu_count >= 1, "cpu_count must be >= 1");
  need(s.dimm_count >= 0, "dimm_count must be >= 0");
  need(finite_nonneg(s.cpu_cost), "cpu_cost must be >= 0");
  need(finite_nonneg(s.dimm_cost), "dimm_cost must be >= 0");
  need(std::isfinite(s.qps) && s.qps > 0.0, "qps must be > 0");
  need(std::isfinite(s.power_w) && s.power_w > 0.0, "power_w must be > 0");
  need(std::isfinite(s.utilization_pct) && s.utilization_pct > 0.0 &&
           s.utilization_pct <= 100.0,
       "utilization_pct must be in (0,100]");
  need(std::isfinite(s.yield_fraction) && s.yield_fraction > 0.0 &&
           s.yield_fraction <= 1.0,
       "yield_fraction must be in (0,1]");
  need(s.nr_ics >= 0, "nr_ics must be >= 0");
  need(finite_nonneg(s.kr_packaging), "kr_packaging must be >= 0");
  need(finite_nonneg(s.ci_op), "ci_op must be >= 0");
  need(finite_nonneg(s.ci_fab), "ci_fab must be >= 0");
  need(finite_nonneg(s.epa), "epa must be >= 0");
  need(finite_nonneg(s.gpa), "gpa must be >= 0");
  need(finite_nonneg(s.mpa), "mpa must be >= 0");
  need(finite_nonneg(s.die_area_cm2), "die_area_cm2 must be >= 0");
  need(finite_nonneg(s.cps_dram), "cps_dram must be >= 0");
  need(finite_nonneg(s.cap_dram_gb), "cap_dram_gb must be >= 0");
  return out;
}

Fleet::Fleet(std::vector<ServerSpec> servers) : servers_(std::move(servers)) {
  if (servers_.empty()) throw FleetError("fleet has no servers");
  for (const auto& s : servers_) {
    auto problems = check_server(s);
    if (!problems.empty()) {
      throw FleetError("server '" + s.id + "': " + problems.front());
    }
  }
  std::sort(servers_.begin(), servers_.end(),
            [](const ServerSpec& a, const ServerSpec& b) {
              if (a.entry_year != b.entry_year) return a.entry_year < b.entry_year;
              return a.id < b.id;
            });
  std::set<std::string_view> seen;
  for (const auto& s : servers_) {
    if (!seen.insert(s.id).second) throw FleetError("duplicate server id '" + s.id + "'");
  }
}

std::optional<std::size_t> Fleet::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < servers_.size(); ++i) {
    if (servers_[i].id == id) return i;
  }
  return std::nullopt;
}

const ServerSpec* Fleet::find(std::string_view id) const {
  auto i = index_of(id);
  return i ? &servers_[*i] : nullptr;
}

std::vector<std::string> check_config(const EconomicConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.end_year <= cfg.start_year) out.emplace_back("end_year must be greater than start_year");
  if (!finite_nonneg(cfg.energy_price)) out.emplace_back("energy_price must be >= 0");
  if (!(std::isfinite(cfg.hours_per_year) && cfg.hours_per_year > 0.0 &&
        cfg.hours_per_year <= 8784.0)) {
    out.emplace_back("hours_per_year must be in (0,8784]");
  }
  return out;
}

void require_valid(const EconomicConfig& cfg) {
  auto problems = check_config(cfg);
  if (problems.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& p : problems) msg += " " + p + ";";
  msg.pop_back();
  throw ConfigError(msg);
}

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kQpsPerTco:
      return "qps-per-tco";
    case MetricKind::kQpsPerCo2:
      return "qps-per-co2";
    case MetricKind::kQpsPerTcoXCo2:
      return "qps-per-tco-co2";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric_kind(std::string_view text) {
  for (auto k : {MetricKind::kQpsPerTco, MetricKind::kQpsPerCo2, MetricKind::kQpsPerTcoXCo2}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string PlanValidation::message() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& v : violations) {
    if (!first) os << "; ";
    first = false;
    if (v.segment) os << "segment " << *v.segment << ": ";
    os << v.reason;
  }
  return os.str();
}

PlanValidationError::PlanValidationError(PlanValidation validation)
    : std::runtime_error("invalid plan: " + validation.message()),
      validation_(std::move(validation)) {}

PlanValidation validate_plan(const UpgradePlan& plan, const Fleet& fleet,
                             const EconomicConfig& cfg) {
  PlanValidation result;
  auto add = [&result](std::optional<std::size_t> seg, std::string reason) {
    result.violations.push_back({seg, std::move(reason)});
  };
  if (plan.segments.empty()) {
    add(std::nullopt, "plan has no segments");
    return result;
  }
  if (plan.segments.front().start_year != cfg.start_year) {
    add(0, "plan must start at start_year " + std::to_string(cfg.start_year) + " (got " +
               std::to_string(plan.segments.front().start_year) + ")");
  }
  const ServerSpec* previous = nullptr;
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    const auto& seg = plan.segments[i];
    if (seg.duration_years < 1) {
      add(i, "duration must be >= 1 year (got " + std::to_string(seg.duration_years) + ")");
    }
    if (i > 0) {
      const auto& prev = plan.segments[i - 1];
      if (seg.start_year != prev.end_year()) {
        add(i, "segment starts in " + std::to_string(seg.start_year) +
                   " but previous segment ends in " + std::to_string(prev.end_year()));
      }
    }
    const ServerSpec* server = fleet.find(seg.server_id);
    if (server == nullptr) {
      add(i, "unknown server '" + seg.server_id + "'");
    } else {
      if (server->entry_year > seg.start_year) {
        add(i, "server " + server->id + " (entry " + std::to_string(server->entry_year) +
                   ") not available in " + std::to_string(seg.start_year));
      }
      if (cfg.monotone_only && previous != nullptr && previous->id != server->id &&
          server->entry_year <= previous->entry_year) {
        add(i, "server " + server->id + " is not newer than " + previous->id +
                   " (monotone upgrades only)");
      }
    }
    previous = server;
  }
  const int end = plan.segments.back().end_year();
  if (end != cfg.end_year) {
    add(std::nullopt, "plan ends in " + std::to_string(end) + " but depreciation ends in " +
                          std::to_string(cfg.end_year));
  }
  return result;
}

UpgradePlan canonicalize(const UpgradePlan& plan) {
  UpgradePlan out;
  out.segments.reserve(plan.segments.size());
  for (const auto& seg : plan.segments) {
    if (!out.segments.empty() && out.segments.back().server_id == seg.server_id) {
      out.segments.back().duration_years += seg.duration_years;
    } else {
      out.segments.push_back(seg);
    }
  }
  return out;
}

bool is_canonical(const UpgradePlan& plan) {
  for (std::size_t i = 1; i < plan.segments.size(); ++i) {
    if (plan.segments[i].server_id == plan.segments[i - 1].server_id) return false;
  }
  return true;
}

std::string format_plan_string(const UpgradePlan& plan) {
  std::string out;
  for (const auto& seg : plan.segments) {
    if (!out.empty()) out += ',';
    out += seg.server_id;
    out += ':';
    out += std::to_string(seg.start_year);
  }
  return out;
}

}  // namespace fleetplan
