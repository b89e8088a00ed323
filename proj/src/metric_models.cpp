#include "fleetplan/metric_models.hpp"

#include <stdexcept>

namespace fleetplan {

double capex(const ServerSpec& server) {
  return server.cpu_count * server.cpu_cost + server.dimm_count * server.dimm_cost;
}

double segment_energy(const ServerSpec& server, int duration_years, const EconomicConfig& cfg) {
  return (server.power_w / 1000.0) * cfg.hours_per_year * duration_years;
}

double opex(const ServerSpec& server, int duration_years, const EconomicConfig& cfg) {
  return segment_energy(server, duration_years, cfg) * cfg.energy_price;
}

double embodied_co2(const ServerSpec& server, DramCapacity dram) {
  const double die = (server.ci_fab * server.epa + server.gpa + server.mpa) *
                     server.die_area_cm2 / server.yield_fraction;
  const double packaging = server.nr_ics * server.kr_packaging;
  const double dram_units = dram == DramCapacity::kPerDimm ? server.dimm_count : 1.0;
  return server.cpu_count * (die + packaging) +
         dram_units * server.cps_dram * server.cap_dram_gb;
}

double operational_co2(const ServerSpec& server, int duration_years, const EconomicConfig& cfg) {
  return segment_energy(server, duration_years, cfg) * server.ci_op;
}

SegmentCost segment_cost(const ServerSpec& server, int duration_years, const EconomicConfig& cfg) {
  return {capex(server), opex(server, duration_years, cfg),
          segment_energy(server, duration_years, cfg)};
}

SegmentCarbon segment_carbon(const ServerSpec& server, int duration_years,
                             const EconomicConfig& cfg) {
  return {embodied_co2(server, cfg.dram_capacity), operational_co2(server, duration_years, cfg)};
}

double aggregate_qps(const UpgradePlan& plan, const Fleet& fleet, const EconomicConfig& cfg) {
  double queries = 0.0;
  for (const auto& seg : plan.segments) {
    const ServerSpec* server = fleet.find(seg.server_id);
    if (server == nullptr) throw std::invalid_argument("unknown server '" + seg.server_id + "'");
    queries += server->qps * seg.duration_years;
  }
  return queries / cfg.horizon();
}

}  // namespace fleetplan
