#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fleetplan/fleet_model.hpp"
#include "fleetplan/solver.hpp"

namespace fleetplan {

/// Malformed catalog or config input. row is the 1-based line number in the
/// file (the header is row 1) and column the header name, when known.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::optional<std::size_t> row = std::nullopt,
             std::string column = {});

  std::optional<std::size_t> row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::optional<std::size_t> row_;
  std::string column_;
};

class PlanParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Catalog header, in the order write_fleet_csv emits it.
inline constexpr std::array<std::string_view, 20> kCatalogColumns = {
    "Server", "Year", "#CPUs", "#DIMMS", "CPU_Cost", "DIMM_Price", "QPS",
    "Power",  "Util.", "CI",   "Nr",     "Kr",       "Yield",      "Cifab",
    "EPA",    "GPA",  "MPA",  "Area",   "CPSDram",  "CapDram"};

/// Reads a catalog CSV with a header row. Columns may come in any order;
/// all of kCatalogColumns are required. Entry years outside [1990, 2100]
/// are rejected.
Fleet parse_fleet_csv(std::istream& in);
Fleet load_fleet_csv(const std::filesystem::path& path);

/// Writes the catalog in kCatalogColumns order with round-trip exact numbers.
void write_fleet_csv(const Fleet& fleet, std::ostream& out);

/// Flat JSON object; absent keys keep their EconomicConfig defaults.
///   start_year, end_year, energy_price_usd_per_kwh, hours_per_year,
///   baseline_server_id, monotone_only, dram_capacity ("per-dimm" | "per-server")
EconomicConfig parse_config_json(std::string_view text);
EconomicConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const EconomicConfig& cfg);

/// Parses "ID:YEAR(,ID:YEAR)*". Durations follow from consecutive years and
/// cfg.end_year. The plan is validated and returned canonical.
/// Throws PlanParseError on grammar or ordering errors and
/// PlanValidationError on plan-rule violations.
UpgradePlan parse_plan_string(std::string_view text, const Fleet& fleet,
                              const EconomicConfig& cfg);

enum class ReportFormat { kCsv, kJson };
std::optional<ReportFormat> parse_report_format(std::string_view text);

/// 10 significant digits.
std::string format_number(double value);

inline constexpr std::string_view kReportCsvHeader =
    "plan,n_upgrades,qps,tco,co2,qps_per_tco,qps_per_co2,qps_per_tco_co2,"
    "norm_qps,norm_tco,norm_co2,norm_metric,rank";

/// The plan column is double-quoted since plan strings contain commas.
/// norm_metric is the normalized value of the report's objective; the
/// normalized columns are empty when the report has no baseline.
void emit_report(const SolverReport& report, ReportFormat format, std::ostream& out);

/// Writes through a temporary file and renames it into place, so a failure
/// never leaves a partial report behind. Throws IoError.
void write_report_file(const SolverReport& report, ReportFormat format,
                       const std::filesystem::path& path);

/// Same atomic-replace behavior for arbitrary content.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace fleetplan
