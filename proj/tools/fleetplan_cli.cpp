// fleetplan: evaluate, rank and compare server upgrade plans.
//
// Exit status is 0 on success. Any failure prints a single line
//   error: <category>: <message>
// to stderr and exits nonzero without writing output files.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fleetplan/evaluator.hpp"
#include "fleetplan/fleet_model.hpp"
#include "fleetplan/io.hpp"
#include "fleetplan/solver.hpp"

using namespace fleetplan;

namespace {

constexpr int kExitFailure = 1;

struct CommonOptions {
  std::string servers = FLEETPLAN_DEFAULT_CATALOG;
  std::string config;
  std::optional<double> energy_price;
  bool monotone_only = false;
  std::string format = "csv";
  std::string out;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--servers", opt.servers, "Server catalog CSV")->capture_default_str();
  cmd->add_option("--config", opt.config, "Economic config JSON");
  cmd->add_option("--energy-price", opt.energy_price, "Override energy price (USD/kWh)");
  cmd->add_flag("--monotone-only", opt.monotone_only,
                "Only upgrade to servers with a strictly newer entry year");
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", opt.out, "Write output to this file instead of stdout");
  cmd->add_option("--workers", opt.workers, "Worker threads (0 = all cores)");
}

void add_metric(CLI::App* cmd, std::string& metric) {
  cmd->add_option("--metric", metric, "Objective")
      ->check(CLI::IsMember({"qps-per-tco", "qps-per-co2", "qps-per-tco-co2"}))
      ->capture_default_str();
}

struct Inputs {
  Fleet fleet;
  EconomicConfig cfg;
};

Inputs load_inputs(const CommonOptions& opt) {
  EconomicConfig cfg = opt.config.empty() ? EconomicConfig{} : load_config(opt.config);
  if (opt.energy_price) cfg.energy_price = *opt.energy_price;
  if (opt.monotone_only) cfg.monotone_only = true;
  require_valid(cfg);
  return {load_fleet_csv(opt.servers), cfg};
}

void deliver(const CommonOptions& opt, const std::string& content) {
  if (opt.out.empty()) {
    std::cout << content << std::flush;
  } else {
    write_file_atomically(opt.out, content);
  }
}

std::string render(const SolverReport& report, const CommonOptions& opt) {
  std::ostringstream os;
  emit_report(report, *parse_report_format(opt.format), os);
  return os.str();
}

int fail(std::string_view category, std::string_view message) {
  std::cerr << "error: " << category << ": " << message << '\n';
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Server upgrade-plan optimizer"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string metric = "qps-per-tco-co2";
  std::string plan_text;
  std::size_t top_n = 10;
  std::string rank_all;
  std::uint64_t rank_all_limit = 5'000'000;
  int cycle = 0;
  double sweep_from = 0.02, sweep_to = 0.30, sweep_step = 0.01;
  std::string catalog_out;

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one plan");
  evaluate->add_option("--plan", plan_text, "Plan string, e.g. A:2010,B:2011")->required();
  add_metric(evaluate, metric);
  add_common(evaluate, opt);

  auto* global = app.add_subcommand("solve-global", "Rank every plan exhaustively");
  global->add_option("--top", top_n, "Number of plans to report")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  global->add_option("--rank-all", rank_all, "Also write the full ranking to this file");
  global->add_option("--rank-all-limit", rank_all_limit,
                     "Refuse --rank-all when the plan count exceeds this")
      ->capture_default_str();
  add_metric(global, metric);
  add_common(global, opt);

  auto* local = app.add_subcommand("solve-local", "Build one fixed-cycle greedy plan");
  local->add_option("--cycle", cycle, "Upgrade cycle in years")->required();
  add_metric(local, metric);
  add_common(local, opt);

  auto* all_local = app.add_subcommand("solve-all-local", "Greedy plans for every cycle length");
  add_metric(all_local, metric);
  add_common(all_local, opt);

  auto* count = app.add_subcommand("count-plans", "Count canonical plans");
  add_common(count, opt);

  auto* sweep = app.add_subcommand("sweep-price", "Rank of a plan across energy prices");
  sweep->add_option("--plan", plan_text, "Plan string")->required();
  sweep->add_option("--from", sweep_from)->capture_default_str();
  sweep->add_option("--to", sweep_to)->capture_default_str();
  sweep->add_option("--step", sweep_step)->check(CLI::PositiveNumber)->capture_default_str();
  add_metric(sweep, metric);
  add_common(sweep, opt);

  auto* catalog = app.add_subcommand("catalog", "Validate a catalog and write it back");
  catalog->add_option("--write", catalog_out, "Destination CSV")->required();
  add_common(catalog, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    const Inputs in = load_inputs(opt);
    const MetricKind kind = *parse_metric_kind(metric);
    const SearchOptions search{opt.workers};

    if (evaluate->parsed()) {
      const UpgradePlan plan = parse_plan_string(plan_text, in.fleet, in.cfg);
      PlanEvaluation eval = evaluate_plan(plan, in.fleet, in.cfg);
      if (auto base = baseline_evaluation(in.fleet, in.cfg)) eval = normalize(eval, *base);
      SolverReport report;
      report.objective_kind = kind;
      report.config = in.cfg;
      report.total_plans = 1;
      report.ranked.push_back(std::move(eval));
      deliver(opt, render(report, opt));
    } else if (global->parsed()) {
      if (!rank_all.empty()) {
        const std::uint64_t total = count_plans(in.fleet, in.cfg);
        if (total > rank_all_limit) {
          return fail("limit", "--rank-all would write " + std::to_string(total) +
                                   " rows, above --rank-all-limit " +
                                   std::to_string(rank_all_limit));
        }
        const SolverReport full = solve_global(in.fleet, in.cfg, kind, total, search);
        SolverReport top = full;
        if (top.ranked.size() > top_n) top.ranked.resize(top_n);
        const std::string top_text = render(top, opt);
        std::ostringstream all;
        emit_report(full, *parse_report_format(opt.format), all);
        write_file_atomically(rank_all, all.str());
        deliver(opt, top_text);
      } else {
        deliver(opt, render(solve_global(in.fleet, in.cfg, kind, top_n, search), opt));
      }
    } else if (local->parsed()) {
      SolverReport report;
      report.objective_kind = kind;
      report.config = in.cfg;
      report.total_plans = 1;
      report.ranked.push_back(solve_local(in.fleet, in.cfg, {cycle, kind}));
      report.cycle_years.push_back(cycle);
      deliver(opt, render(report, opt));
    } else if (all_local->parsed()) {
      deliver(opt, render(solve_all_local(in.fleet, in.cfg, kind), opt));
    } else if (count->parsed()) {
      const std::uint64_t total = count_plans(in.fleet, in.cfg);
      deliver(opt, opt.format == "json" ? "{\"total_plans\": " + std::to_string(total) + "}\n"
                                        : std::to_string(total) + "\n");
    } else if (sweep->parsed()) {
      const UpgradePlan plan = parse_plan_string(plan_text, in.fleet, in.cfg);
      std::ostringstream os;
      os << "energy_price,rank\n";
      const int steps = static_cast<int>((sweep_to - sweep_from) / sweep_step + 1e-9);
      for (int i = 0; i <= steps; ++i) {
        EconomicConfig cfg = in.cfg;
        cfg.energy_price = std::round((sweep_from + i * sweep_step) * 1e9) / 1e9;
        os << format_number(cfg.energy_price) << ',' << rank_of(plan, in.fleet, cfg, kind, search)
           << '\n';
      }
      deliver(opt, os.str());
    } else if (catalog->parsed()) {
      std::ostringstream os;
      write_fleet_csv(in.fleet, os);
      write_file_atomically(catalog_out, os.str());
    }
  } catch (const InputError& e) {
    return fail("input", e.what());
  } catch (const FleetError& e) {
    return fail("input", e.what());
  } catch (const ConfigError& e) {
    return fail("config", e.what());
  } catch (const PlanParseError& e) {
    return fail("plan", e.what());
  } catch (const PlanValidationError& e) {
    return fail("plan", e.what());
  } catch (const SolverError& e) {
    return fail("solver", e.what());
  } catch (const IoError& e) {
    return fail("io", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
