#pragma once

#include "fleetplan/fleet_model.hpp"

namespace fleetplan {

struct SegmentCost {
  double capex = 0.0;
  double opex = 0.0;
  double energy_kwh = 0.0;
};

struct SegmentCarbon {
  double embodied_kg = 0.0;
  double operational_kg = 0.0;
};

/// Purchase cost of the CPUs and DIMMs of one server.
double capex(const ServerSpec& server);

/// (power_w / 1000) * hours_per_year * duration_years.
double segment_energy(const ServerSpec& server, int duration_years, const EconomicConfig& cfg);

double opex(const ServerSpec& server, int duration_years, const EconomicConfig& cfg);

/// ACT-style manufacturing carbon for one server:
///
///   cpus * ((ci_fab * epa + gpa + mpa) * area / yield + nr_ics * kr)
///     + dram_units * cps_dram * cap_dram_gb
///
/// where dram_units is dimm_count when the capacity column is per DIMM and 1
/// when it already is the server total.
double embodied_co2(const ServerSpec& server, DramCapacity dram = DramCapacity::kPerDimm);

double operational_co2(const ServerSpec& server, int duration_years, const EconomicConfig& cfg);

SegmentCost segment_cost(const ServerSpec& server, int duration_years, const EconomicConfig& cfg);
SegmentCarbon segment_carbon(const ServerSpec& server, int duration_years,
                             const EconomicConfig& cfg);

/// Time-weighted mean throughput over the depreciation period. Durations are
/// in years; converting both numerator and denominator to seconds cancels.
/// Expects a plan that validate_plan accepts.
double aggregate_qps(const UpgradePlan& plan, const Fleet& fleet, const EconomicConfig& cfg);

}  // namespace fleetplan
