#include "fleetplan/solver.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <string>
#include <thread>

#include "fleetplan/metric_models.hpp"

namespace fleetplan {

namespace {

// Per-fleet tables for the search: availability offsets relative to
// start_year and the totals of every (server, duration) segment.
class SearchSpace {
 public:
  SearchSpace(const Fleet& fleet, const EconomicConfig& cfg)
      : fleet_(fleet), horizon_(cfg.horizon()), monotone_(cfg.monotone_only) {
    require_valid(cfg);
    const std::size_t n = fleet.size();
    available_from_.resize(n);
    table_.resize(n * static_cast<std::size_t>(horizon_ + 1));
    for (std::size_t s = 0; s < n; ++s) {
      available_from_[s] = std::max(0, fleet[s].entry_year - cfg.start_year);
      for (int d = 1; d <= horizon_; ++d) table_[index(s, d)] = segment_totals(fleet[s], d, cfg);
    }
    if (fleet[0].entry_year > cfg.start_year) {
      throw SolverError("no server available at start_year " + std::to_string(cfg.start_year));
    }
  }

  const Fleet& fleet() const { return fleet_; }
  int horizon() const { return horizon_; }
  std::size_t size() const { return available_from_.size(); }
  int available_from(std::size_t s) const { return available_from_[s]; }
  const SegmentTotals& segment(std::size_t s, int d) const { return table_[index(s, d)]; }

  // `last` is kNone for the first segment.
  bool may_follow(std::size_t s, std::size_t last) const {
    if (last == kNone) return true;
    if (s == last) return false;
    return !monotone_ || fleet_[s].entry_year > fleet_[last].entry_year;
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

 private:
  std::size_t index(std::size_t s, int d) const {
    return s * static_cast<std::size_t>(horizon_ + 1) + static_cast<std::size_t>(d);
  }

  const Fleet& fleet_;
  int horizon_;
  bool monotone_;
  std::vector<int> available_from_;
  std::vector<SegmentTotals> table_;
};

struct Step {
  std::uint32_t server;
  std::int32_t start;  // years after start_year
};

using Path = std::vector<Step>;

std::string path_string(const SearchSpace& space, const Path& path, int start_year) {
  std::string out;
  for (const auto& step : path) {
    if (!out.empty()) out += ',';
    out += space.fleet()[step.server].id;
    out += ':';
    out += std::to_string(start_year + step.start);
  }
  return out;
}

UpgradePlan path_plan(const SearchSpace& space, const Path& path, int start_year) {
  UpgradePlan plan;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const int end = i + 1 < path.size() ? path[i + 1].start : space.horizon();
    plan.segments.push_back(
        {space.fleet()[path[i].server].id, start_year + path[i].start, end - path[i].start});
  }
  return plan;
}

// Depth-first walk over canonical plans whose first segments are already in
// `path`; `year` is where the next segment starts.
template <class Leaf>
void descend(const SearchSpace& space, int year, std::size_t last, const PlanTotals& acc,
             Path& path, Leaf& leaf) {
  const int remaining = space.horizon() - year;
  for (std::size_t s = 0; s < space.size(); ++s) {
    if (space.available_from(s) > year) break;
    if (!space.may_follow(s, last)) continue;
    path.push_back({static_cast<std::uint32_t>(s), year});
    for (int d = 1; d < remaining; ++d) {
      descend(space, year + d, s, acc.plus(space.segment(s, d)), path, leaf);
    }
    leaf(acc.plus(space.segment(s, remaining)), path);
    path.pop_back();
  }
}

// The search is split by the first segment's (server, duration).
struct FirstSegment {
  std::size_t server;
  int duration;
};

std::vector<FirstSegment> first_segments(const SearchSpace& space) {
  std::vector<FirstSegment> tasks;
  for (std::size_t s = 0; s < space.size() && space.available_from(s) == 0; ++s) {
    for (int d = 1; d <= space.horizon(); ++d) tasks.push_back({s, d});
  }
  return tasks;
}

template <class Leaf>
void run_task(const SearchSpace& space, FirstSegment task, Leaf& leaf) {
  Path path;
  path.reserve(static_cast<std::size_t>(space.horizon()));
  path.push_back({static_cast<std::uint32_t>(task.server), 0});
  const PlanTotals acc = PlanTotals{}.plus(space.segment(task.server, task.duration));
  if (task.duration == space.horizon()) {
    leaf(acc, path);
  } else {
    descend(space, task.duration, task.server, acc, path, leaf);
  }
}

unsigned worker_count(SearchOptions options, std::size_t tasks) {
  unsigned w = options.workers != 0 ? options.workers : std::thread::hardware_concurrency();
  w = std::max(1u, w);
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(1, tasks)));
}

// Runs every first-segment task on a pool of workers; each task
// owns its own leaf object so no state is shared.
template <class LeafT, class MakeLeaf>
std::vector<LeafT> run_parallel(const SearchSpace& space, SearchOptions options,
                                MakeLeaf make_leaf) {
  const auto tasks = first_segments(space);
  std::vector<LeafT> leaves;
  leaves.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) leaves.push_back(make_leaf());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(space, tasks[i], leaves[i]);
  };
  const unsigned workers = worker_count(options, tasks.size());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return leaves;
}

struct Candidate {
  double objective;
  Path path;
  std::string plan;  // filled lazily for tie-breaks
};

class TopCollector {
 public:
  TopCollector(const SearchSpace& space, int start_year, MetricKind kind, std::size_t capacity)
      : space_(&space), start_year_(start_year), kind_(kind), capacity_(capacity) {}

  const std::string& plan_of(Candidate& c) const {
    if (c.plan.empty()) c.plan = path_string(*space_, c.path, start_year_);
    return c.plan;
  }

  auto better_fn() const {
    return [this](Candidate& a, Candidate& b) {
      if (a.objective != b.objective) return a.objective > b.objective;
      if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
      return plan_of(a) < plan_of(b);
    };
  }

  void operator()(const PlanTotals& totals, const Path& path) {
    ++count;
    const double obj = objective_of(totals, space_->horizon(), kind_);
    if (heap.size() == capacity_) {
      Candidate& worst = heap.front();
      if (obj < worst.objective) return;
      if (obj == worst.objective) {
        if (path.size() > worst.path.size()) return;
        if (path.size() == worst.path.size()) {
          if (path_string(*space_, path, start_year_) >= plan_of(worst)) return;
        }
      }
      std::pop_heap(heap.begin(), heap.end(), better_fn());
      heap.pop_back();
    }
    heap.push_back({obj, path, {}});
    std::push_heap(heap.begin(), heap.end(), better_fn());
  }

  std::vector<Candidate> heap;
  std::uint64_t count = 0;

 private:
  const SearchSpace* space_;
  int start_year_;
  MetricKind kind_;
  std::size_t capacity_;
};

PlanEvaluation with_baseline(PlanEvaluation eval, const std::optional<PlanEvaluation>& baseline) {
  if (!baseline) return eval;
  try {
    return normalize(eval, *baseline);
  } catch (const NormalizationError&) {
    return eval;
  }
}

}  // namespace

bool ranks_before(const PlanEvaluation& a, const PlanEvaluation& b, MetricKind kind) {
  const double oa = objective(a, kind);
  const double ob = objective(b, kind);
  if (oa != ob) return oa > ob;
  if (a.n_upgrades != b.n_upgrades) return a.n_upgrades < b.n_upgrades;
  return format_plan_string(a.plan) < format_plan_string(b.plan);
}

void enumerate_global(const Fleet& fleet, const EconomicConfig& cfg,
                      const std::function<void(const UpgradePlan&)>& visit) {
  const SearchSpace space(fleet, cfg);
  const int horizon = space.horizon();
  std::vector<int> durations;
  std::vector<std::size_t> servers;
  std::vector<int> starts;

  // Server choices for a fixed composition, lexicographic in fleet order.
  std::function<void(std::size_t)> assign = [&](std::size_t i) {
    if (i == durations.size()) {
      UpgradePlan plan;
      for (std::size_t k = 0; k < durations.size(); ++k) {
        plan.segments.push_back({fleet[servers[k]].id, cfg.start_year + starts[k], durations[k]});
      }
      visit(plan);
      return;
    }
    const std::size_t last = i == 0 ? SearchSpace::kNone : servers[i - 1];
    for (std::size_t s = 0; s < space.size() && space.available_from(s) <= starts[i]; ++s) {
      if (!space.may_follow(s, last)) continue;
      servers[i] = s;
      assign(i + 1);
    }
  };

  std::function<void(int)> compose = [&](int year) {
    if (year == horizon) {
      servers.assign(durations.size(), 0);
      assign(0);
      return;
    }
    for (int d = 1; year + d <= horizon; ++d) {
      durations.push_back(d);
      starts.push_back(year);
      compose(year + d);
      durations.pop_back();
      starts.pop_back();
    }
  };
  compose(0);
}

std::uint64_t count_plans(const Fleet& fleet, const EconomicConfig& cfg) {
  const SearchSpace space(fleet, cfg);
  const int horizon = space.horizon();
  const std::size_t n = space.size();
  // ways[y][s]: partial plans covering [0, y) whose last segment uses s and
  // ends at y; column n is the empty prefix.
  std::vector<std::vector<std::uint64_t>> ways(static_cast<std::size_t>(horizon + 1),
                                               std::vector<std::uint64_t>(n + 1, 0));
  ways[0][n] = 1;
  for (int y = 0; y < horizon; ++y) {
    for (std::size_t last = 0; last <= n; ++last) {
      const std::uint64_t w = ways[y][last];
      if (w == 0) continue;
      const std::size_t prev = last == n ? SearchSpace::kNone : last;
      for (std::size_t s = 0; s < n && space.available_from(s) <= y; ++s) {
        if (!space.may_follow(s, prev)) continue;
        for (int end = y + 1; end <= horizon; ++end) {
          auto& cell = ways[end][s];
          if (__builtin_add_overflow(cell, w, &cell)) {
            throw SolverError("plan count overflows 64 bits");
          }
        }
      }
    }
  }
  std::uint64_t total = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (__builtin_add_overflow(total, ways[horizon][s], &total)) {
      throw SolverError("plan count overflows 64 bits");
    }
  }
  return total;
}

SolverReport solve_global(const Fleet& fleet, const EconomicConfig& cfg, MetricKind kind,
                          std::size_t top_n, SearchOptions options) {
  if (top_n < 1) throw SolverError("top_n must be >= 1");
  const SearchSpace space(fleet, cfg);
  auto leaves = run_parallel<TopCollector>(
      space, options, [&] { return TopCollector(space, cfg.start_year, kind, top_n); });

  SolverReport report;
  report.objective_kind = kind;
  report.config = cfg;
  TopCollector merged(space, cfg.start_year, kind, top_n);
  for (auto& leaf : leaves) {
    report.total_plans += leaf.count;
    for (auto& c : leaf.heap) merged.heap.push_back(std::move(c));
  }
  auto better = merged.better_fn();
  std::sort(merged.heap.begin(), merged.heap.end(), better);
  if (merged.heap.size() > top_n) merged.heap.resize(top_n);

  const auto baseline = baseline_evaluation(fleet, cfg);
  report.ranked.reserve(merged.heap.size());
  for (const auto& c : merged.heap) {
    report.ranked.push_back(
        with_baseline(evaluate_plan(path_plan(space, c.path, cfg.start_year), fleet, cfg),
                       baseline));
  }
  return report;
}

std::uint64_t rank_of(const UpgradePlan& plan, const Fleet& fleet, const EconomicConfig& cfg,
                      MetricKind kind, SearchOptions options) {
  const PlanEvaluation target = evaluate_plan(plan, fleet, cfg);
  const double target_obj = objective(target, kind);
  const std::size_t target_len = target.plan.segments.size();
  const std::string target_str = format_plan_string(target.plan);
  const SearchSpace space(fleet, cfg);

  struct BetterCounter {
    const SearchSpace* space;
    int start_year;
    MetricKind kind;
    double target_obj;
    std::size_t target_len;
    const std::string* target_str;
    std::uint64_t better = 0;

    void operator()(const PlanTotals& totals, const Path& path) {
      const double obj = objective_of(totals, space->horizon(), kind);
      if (obj > target_obj) {
        ++better;
      } else if (obj == target_obj) {
        if (path.size() < target_len ||
            (path.size() == target_len && path_string(*space, path, start_year) < *target_str)) {
          ++better;
        }
      }
    }
  };

  auto leaves = run_parallel<BetterCounter>(space, options, [&] {
    return BetterCounter{&space, cfg.start_year, kind, target_obj, target_len, &target_str};
  });
  std::uint64_t better = 0;
  for (const auto& leaf : leaves) better += leaf.better;
  return better + 1;
}

PlanEvaluation solve_local(const Fleet& fleet, const EconomicConfig& cfg, LocalPlanSpec spec) {
  require_valid(cfg);
  const int horizon = cfg.horizon();
  if (spec.cycle_years < 1 || horizon % spec.cycle_years != 0) {
    throw SolverError("cycle of " + std::to_string(spec.cycle_years) +
                      " years does not divide the " + std::to_string(horizon) + "-year horizon");
  }
  UpgradePlan plan;
  const ServerSpec* installed = nullptr;
  for (int year = cfg.start_year; year < cfg.end_year; year += spec.cycle_years) {
    const ServerSpec* pick = nullptr;
    double pick_obj = 0.0;
    for (const auto& s : fleet.servers()) {
      if (s.entry_year > year) break;
      const bool reuse = installed != nullptr && installed->id == s.id;
      if (cfg.monotone_only && installed != nullptr && !reuse &&
          s.entry_year <= installed->entry_year) {
        continue;
      }
      const double tco = (reuse ? 0.0 : capex(s)) + opex(s, spec.cycle_years, cfg);
      const double co2 = (reuse ? 0.0 : embodied_co2(s, cfg.dram_capacity)) +
                         operational_co2(s, spec.cycle_years, cfg);
      double obj = 0.0;
      switch (spec.greedy_metric) {
        case MetricKind::kQpsPerTco:
          obj = s.qps / tco;
          break;
        case MetricKind::kQpsPerCo2:
          obj = s.qps / co2;
          break;
        case MetricKind::kQpsPerTcoXCo2:
          obj = s.qps / (tco * co2);
          break;
      }
      const bool wins = pick == nullptr || obj > pick_obj ||
                        (obj == pick_obj && (s.entry_year > pick->entry_year ||
                                             (s.entry_year == pick->entry_year && s.id < pick->id)));
      if (wins) {
        pick = &s;
        pick_obj = obj;
      }
    }
    if (pick == nullptr) throw SolverError("no server available in " + std::to_string(year));
    plan.segments.push_back({pick->id, year, spec.cycle_years});
    installed = pick;
  }
  return with_baseline(evaluate_plan(plan, fleet, cfg), baseline_evaluation(fleet, cfg));
}

std::vector<int> admissible_cycles(const EconomicConfig& cfg) {
  std::vector<int> cycles;
  for (int c = 1; c <= cfg.horizon(); ++c) {
    if (cfg.horizon() % c == 0) cycles.push_back(c);
  }
  return cycles;
}

SolverReport solve_all_local(const Fleet& fleet, const EconomicConfig& cfg, MetricKind kind) {
  require_valid(cfg);
  std::vector<std::pair<PlanEvaluation, int>> entries;
  for (int c : admissible_cycles(cfg)) entries.emplace_back(solve_local(fleet, cfg, {c, kind}), c);
  std::stable_sort(entries.begin(), entries.end(), [kind](const auto& a, const auto& b) {
    return ranks_before(a.first, b.first, kind);
  });
  SolverReport report;
  report.objective_kind = kind;
  report.config = cfg;
  report.total_plans = entries.size();
  for (auto& [eval, c] : entries) {
    report.ranked.push_back(std::move(eval));
    report.cycle_years.push_back(c);
  }
  return report;
}

}  // namespace fleetplan
