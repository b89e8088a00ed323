#include "fleetplan/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

namespace fleetplan {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string render_exact(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Column accessor for one catalog data row.
class RowReader {
 public:
  RowReader(const std::map<std::string, std::size_t, std::less<>>& index,
            const std::vector<std::string_view>& cells, std::size_t row)
      : index_(index), cells_(cells), row_(row) {}

  std::string_view text(std::string_view column) const {
    return cells_[index_.find(column)->second];
  }

  double number(std::string_view column) const {
    const auto cell = text(column);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
      throw InputError("non-numeric value '" + std::string(cell) + "'", row_, std::string(column));
    }
    return v;
  }

  int integer(std::string_view column) const {
    const double v = number(column);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw InputError("expected an integer, got '" + std::string(text(column)) + "'", row_,
                       std::string(column));
    }
    return static_cast<int>(v);
  }

 private:
  const std::map<std::string, std::size_t, std::less<>>& index_;
  const std::vector<std::string_view>& cells_;
  std::size_t row_;
};

// Maps a check_server message back to the catalog column it concerns.
std::string column_for(const std::string& message) {
  static const std::pair<std::string_view, std::string_view> fields[] = {
      {"id", "Server"},          {"cpu_count", "#CPUs"},    {"dimm_count", "#DIMMS"},
      {"cpu_cost", "CPU_Cost"},  {"dimm_cost", "DIMM_Price"}, {"qps", "QPS"},
      {"power_w", "Power"},      {"utilization_pct", "Util."}, {"yield_fraction", "Yield"},
      {"nr_ics", "Nr"},          {"kr_packaging", "Kr"},    {"ci_op", "CI"},
      {"ci_fab", "Cifab"},       {"epa", "EPA"},            {"gpa", "GPA"},
      {"mpa", "MPA"},            {"die_area_cm2", "Area"},  {"cps_dram", "CPSDram"},
      {"cap_dram_gb", "CapDram"}};
  for (const auto& [field, column] : fields) {
    if (message.starts_with(std::string(field) + " ")) return std::string(column);
  }
  return {};
}

}  // namespace

InputError::InputError(const std::string& what, std::optional<std::size_t> row,
                       std::string column)
    : std::runtime_error([&] {
        std::string prefix;
        if (row) prefix += "row " + std::to_string(*row);
        if (!column.empty()) prefix += (prefix.empty() ? "" : ", ") + ("column '" + column + "'");
        return prefix.empty() ? what : prefix + ": " + what;
      }()),
      row_(row),
      column_(std::move(column)) {}

Fleet parse_fleet_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw InputError("empty catalog");

  std::map<std::string, std::size_t, std::less<>> index;
  const auto header = split(line, ',');
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!index.emplace(std::string(header[i]), i).second) {
      throw InputError("duplicate column", row, std::string(header[i]));
    }
  }
  for (auto column : kCatalogColumns) {
    if (!index.contains(column)) throw InputError("missing column", row, std::string(column));
  }

  std::vector<ServerSpec> servers;
  std::map<std::string, std::size_t, std::less<>> id_rows;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw InputError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       row);
    }
    const RowReader r(index, cells, row);
    ServerSpec s;
    s.id = std::string(r.text("Server"));
    s.entry_year = r.integer("Year");
    if (s.entry_year < 1990 || s.entry_year > 2100) {
      throw InputError("entry year must be in [1990,2100]", row, "Year");
    }
    s.cpu_count = r.integer("#CPUs");
    s.dimm_count = r.integer("#DIMMS");
    s.cpu_cost = r.number("CPU_Cost");
    s.dimm_cost = r.number("DIMM_Price");
    s.qps = r.number("QPS");
    s.power_w = r.number("Power");
    s.utilization_pct = r.number("Util.");
    s.ci_op = r.number("CI");
    s.nr_ics = r.integer("Nr");
    s.kr_packaging = r.number("Kr");
    s.yield_fraction = r.number("Yield");
    s.ci_fab = r.number("Cifab");
    s.epa = r.number("EPA");
    s.gpa = r.number("GPA");
    s.mpa = r.number("MPA");
    s.die_area_cm2 = r.number("Area");
    s.cps_dram = r.number("CPSDram");
    s.cap_dram_gb = r.number("CapDram");

    const auto problems = check_server(s);
    if (!problems.empty()) throw InputError(problems.front(), row, column_for(problems.front()));
    if (auto [it, fresh] = id_rows.emplace(s.id, row); !fresh) {
      throw InputError("duplicate server id '" + s.id + "' (first seen on row " +
                           std::to_string(it->second) + ")",
                       row, "Server");
    }
    servers.push_back(std::move(s));
  }
  if (servers.empty()) throw InputError("no data rows");
  return Fleet(std::move(servers));
}

Fleet load_fleet_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog '" + path.string() + "'");
  return parse_fleet_csv(in);
}

void write_fleet_csv(const Fleet& fleet, std::ostream& out) {
  for (std::size_t i = 0; i < kCatalogColumns.size(); ++i) {
    out << (i ? "," : "") << kCatalogColumns[i];
  }
  out << '\n';
  for (const auto& s : fleet.servers()) {
    out << s.id << ',' << s.entry_year << ',' << s.cpu_count << ',' << s.dimm_count;
    for (double v : {s.cpu_cost, s.dimm_cost, s.qps, s.power_w, s.utilization_pct, s.ci_op}) {
      out << ',' << render_exact(v);
    }
    out << ',' << s.nr_ics;
    for (double v : {s.kr_packaging, s.yield_fraction, s.ci_fab, s.epa, s.gpa, s.mpa,
                     s.die_area_cm2, s.cps_dram, s.cap_dram_gb}) {
      out << ',' << render_exact(v);
    }
    out << '\n';
  }
}

EconomicConfig parse_config_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  EconomicConfig cfg;
  auto require = [](bool ok, const std::string& key, const char* what) {
    if (!ok) throw ConfigError("config key '" + key + "' must be " + what);
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "start_year" || key == "end_year") {
      require(value.is_number_integer(), key, "an integer");
      (key == "start_year" ? cfg.start_year : cfg.end_year) = value.get<int>();
    } else if (key == "energy_price_usd_per_kwh") {
      require(value.is_number(), key, "a number");
      cfg.energy_price = value.get<double>();
    } else if (key == "hours_per_year") {
      require(value.is_number(), key, "a number");
      cfg.hours_per_year = value.get<double>();
    } else if (key == "baseline_server_id") {
      require(value.is_string(), key, "a string");
      cfg.baseline_server_id = value.get<std::string>();
    } else if (key == "monotone_only") {
      require(value.is_boolean(), key, "a boolean");
      cfg.monotone_only = value.get<bool>();
    } else if (key == "dram_capacity") {
      require(value.is_string() && (value == "per-dimm" || value == "per-server"), key,
              "\"per-dimm\" or \"per-server\"");
      cfg.dram_capacity =
          value == "per-dimm" ? DramCapacity::kPerDimm : DramCapacity::kPerServer;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  require_valid(cfg);
  return cfg;
}

EconomicConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::string config_to_json(const EconomicConfig& cfg) {
  nlohmann::ordered_json j;
  j["start_year"] = cfg.start_year;
  j["end_year"] = cfg.end_year;
  j["energy_price_usd_per_kwh"] = cfg.energy_price;
  j["hours_per_year"] = cfg.hours_per_year;
  j["baseline_server_id"] = cfg.baseline_server_id;
  j["monotone_only"] = cfg.monotone_only;
  j["dram_capacity"] = cfg.dram_capacity == DramCapacity::kPerDimm ? "per-dimm" : "per-server";
  return j.dump(2);
}

UpgradePlan parse_plan_string(std::string_view text, const Fleet& fleet,
                              const EconomicConfig& cfg) {
  require_valid(cfg);
  const auto tokens = split(trim(text), ',');
  UpgradePlan plan;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto tok = tokens[i];
    const auto colon = tok.find(':');
    if (tok.empty() || colon == std::string_view::npos || colon == 0 ||
        tok.find(':', colon + 1) != std::string_view::npos) {
      throw PlanParseError("token " + std::to_string(i + 1) + " '" + std::string(tok) +
                           "' is not of the form ID:YEAR");
    }
    const auto id = trim(tok.substr(0, colon));
    const auto year_text = trim(tok.substr(colon + 1));
    int year = 0;
    auto [ptr, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), year);
    if (year_text.empty() || ec != std::errc{} || ptr != year_text.data() + year_text.size()) {
      throw PlanParseError("token " + std::to_string(i + 1) + " has a non-integer year '" +
                           std::string(year_text) + "'");
    }
    if (fleet.find(id) == nullptr) throw PlanParseError("unknown server '" + std::string(id) + "'");
    if (i == 0 && year != cfg.start_year) {
      throw PlanParseError("plan must start at start_year " + std::to_string(cfg.start_year));
    }
    if (!plan.segments.empty()) {
      auto& prev = plan.segments.back();
      if (year <= prev.start_year) {
        throw PlanParseError("years must be strictly increasing (" + std::to_string(year) +
                             " after " + std::to_string(prev.start_year) + ")");
      }
      prev.duration_years = year - prev.start_year;
    }
    if (year >= cfg.end_year) {
      throw PlanParseError("upgrade year " + std::to_string(year) +
                           " is not before end_year " + std::to_string(cfg.end_year));
    }
    plan.segments.push_back({std::string(id), year, cfg.end_year - year});
  }
  PlanValidation validation = validate_plan(plan, fleet, cfg);
  if (!validation.ok()) throw PlanValidationError(std::move(validation));
  return canonicalize(plan);
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  return std::nullopt;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void emit_report(const SolverReport& report, ReportFormat format, std::ostream& out) {
  const MetricKind kind = report.objective_kind;
  auto normalized_objective = [kind](const RatioMetrics& n) {
    switch (kind) {
      case MetricKind::kQpsPerTco:
        return n.qps_per_tco;
      case MetricKind::kQpsPerCo2:
        return n.qps_per_co2;
      case MetricKind::kQpsPerTcoXCo2:
        return n.qps_per_tco_x_co2;
    }
    return 0.0;
  };

  if (format == ReportFormat::kCsv) {
    out << kReportCsvHeader << '\n';
    for (std::size_t i = 0; i < report.ranked.size(); ++i) {
      const auto& e = report.ranked[i];
      out << '"' << format_plan_string(e.plan) << "\"," << e.n_upgrades << ',' << format_number(e.qps)
          << ',' << format_number(e.tco) << ',' << format_number(e.co2) << ','
          << format_number(e.metric_qps_per_tco) << ',' << format_number(e.metric_qps_per_co2)
          << ',' << format_number(e.metric_qps_per_tco_x_co2) << ',';
      if (e.normalized) {
        const auto& n = *e.normalized;
        out << format_number(n.qps) << ',' << format_number(n.tco) << ','
            << format_number(n.co2) << ',' << format_number(normalized_objective(n)) << ',';
      } else {
        out << ",,,,";
      }
      out << i + 1 << '\n';
    }
    return;
  }

  nlohmann::ordered_json j;
  j["objective"] = to_string(kind);
  j["total_plans"] = report.total_plans;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(report.config));
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.ranked.size(); ++i) {
    const auto& e = report.ranked[i];
    nlohmann::ordered_json row;
    row["rank"] = i + 1;
    row["plan"] = format_plan_string(e.plan);
    row["n_upgrades"] = e.n_upgrades;
    if (i < report.cycle_years.size()) row["cycle_years"] = report.cycle_years[i];
    row["qps"] = e.qps;
    row["tco"] = e.tco;
    row["co2"] = e.co2;
    row["qps_per_tco"] = e.metric_qps_per_tco;
    row["qps_per_co2"] = e.metric_qps_per_co2;
    row["qps_per_tco_co2"] = e.metric_qps_per_tco_x_co2;
    if (e.normalized) {
      const auto& n = *e.normalized;
      row["normalized"] = {{"qps", n.qps},
                           {"tco", n.tco},
                           {"co2", n.co2},
                           {"qps_per_tco", n.qps_per_tco},
                           {"qps_per_co2", n.qps_per_co2},
                           {"qps_per_tco_co2", n.qps_per_tco_x_co2}};
    } else {
      row["normalized"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("failed writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot write '" + path.string() + "': " + ec.message());
  }
}

void write_report_file(const SolverReport& report, ReportFormat format,
                       const std::filesystem::path& path) {
  std::ostringstream buf;
  emit_report(report, format, buf);
  write_file_atomically(path, buf.str());
}

}  // namespace fleetplan
