#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "instance.hpp"
#include "schedule.hpp"
#include "tebd.hpp"

namespace mpsanneal {

inline const std::vector<int> default_chi_grid{1, 2, 3, 4};
inline const std::vector<double> default_time_multiples{1.0, 2.0, 4.0, 8.0};

inline std::vector<double> default_time_grid(const IsingInstance& instance) {
  std::vector<double> out;
  for (double m : default_time_multiples) out.push_back(m * default_t0(instance));
  return out;
}

enum class ClassifyMode {
  // Stop at the first rank that succeeds at any time; chi* only.
  stop_at_chi_star,
  // For every rank, run times in ascending order until the first success.
  minimal_time_per_chi,
};

struct Classification {
  std::optional<int> chi_star;  // empty: unclassified
  std::map<int, std::optional<double>> t_star;  // per chi, minimal successful time
  std::vector<RunRecord> runs;
};

// Produces one RunRecord for (chi, sweep time). Lets callers substitute cached
// or precomputed results.
using RunFunction = std::function<RunRecord(int chi, double sweep_time)>;

inline RunFunction tebd_runner(const IsingInstance& instance, const GroundTruth& truth, double dt,
                               const std::optional<AnnealSchedule>& shape = std::nullopt) {
  return [&instance, &truth, dt, shape](int chi, double time) {
    const AnnealSchedule schedule = shape ? shape->rescaled(time) : default_schedule(time);
    return tebd_anneal(instance, schedule, chi, dt, truth).record;
  };
}

// chi* is the smallest rank in chi_grid for which some time in time_grid
// succeeds. Grids are visited in ascending order.
inline Classification classify_chi_star(std::vector<int> chi_grid, std::vector<double> time_grid,
                                        const RunFunction& run,
                                        ClassifyMode mode = ClassifyMode::minimal_time_per_chi) {
  if (chi_grid.empty() || time_grid.empty()) throw ArgumentError("classification grids must be non-empty");
  std::sort(chi_grid.begin(), chi_grid.end());
  std::sort(time_grid.begin(), time_grid.end());
  Classification c;
  for (int chi : chi_grid) {
    c.t_star[chi] = std::nullopt;
    for (double time : time_grid) {
      RunRecord r = run(chi, time);
      const bool ok = r.success;
      c.runs.push_back(std::move(r));
      if (ok) {
        c.t_star[chi] = time;
        break;
      }
    }
    if (c.t_star[chi] && !c.chi_star) {
      c.chi_star = chi;
      if (mode == ClassifyMode::stop_at_chi_star) break;
    }
  }
  return c;
}

inline Classification classify_chi_star(const IsingInstance& instance, const GroundTruth& truth,
                                        const std::vector<int>& chi_grid,
                                        const std::vector<double>& time_grid, double dt = default_dt,
                                        ClassifyMode mode = ClassifyMode::minimal_time_per_chi) {
  return classify_chi_star(chi_grid, time_grid, tebd_runner(instance, truth, dt), mode);
}

// Success at a time followed by failure at a longer time, for one rank.
struct MonotonicityViolation {
  int chi = 0;
  double success_time = 0.0;
  double failure_time = 0.0;
};

// Full (chi, T) success grid. boundary[chi] is the minimal successful time.
struct HullTable {
  std::string instance_id;
  std::vector<int> chi_grid;
  std::vector<double> time_grid;
  std::vector<RunRecord> cells;  // row-major: chi outer, time inner
  std::map<int, std::optional<double>> boundary;
  std::vector<MonotonicityViolation> violations;

  bool no_hull() const {
    return std::none_of(boundary.begin(), boundary.end(), [](const auto& kv) { return kv.second.has_value(); });
  }
  const RunRecord& cell(std::size_t chi_index, std::size_t time_index) const {
    return cells.at(chi_index * time_grid.size() + time_index);
  }
};

// Extracts the boundary from a complete grid. Violations are reported, not repaired.
inline void extract_hull(HullTable& table) {
  if (table.cells.size() != table.chi_grid.size() * table.time_grid.size())
    throw DimensionError("hull grid is incomplete");
  table.boundary.clear();
  table.violations.clear();
  std::vector<std::size_t> order(table.time_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return table.time_grid[a] < table.time_grid[b]; });
  for (std::size_t ci = 0; ci < table.chi_grid.size(); ++ci) {
    const int chi = table.chi_grid[ci];
    std::optional<double> first;
    for (std::size_t ti : order) {
      const auto& r = table.cell(ci, ti);
      const double t = table.time_grid[ti];
      if (r.success && !first) first = t;
      if (!r.success && first) table.violations.push_back({chi, *first, t});
    }
    table.boundary[chi] = first;
  }
}

inline HullTable success_hull(const std::string& instance_id, const std::vector<int>& chi_grid,
                              const std::vector<double>& time_grid, const RunFunction& run) {
  if (chi_grid.empty() || time_grid.empty()) throw ArgumentError("hull grids must be non-empty");
  HullTable table;
  table.instance_id = instance_id;
  table.chi_grid = chi_grid;
  table.time_grid = time_grid;
  for (int chi : chi_grid)
    for (double t : time_grid) {
      RunRecord r = run(chi, t);
      r.instance_id = instance_id;
      table.cells.push_back(std::move(r));
    }
  extract_hull(table);
  return table;
}

inline HullTable success_hull(const std::string& instance_id, const IsingInstance& instance,
                              const GroundTruth& truth, const std::vector<int>& chi_grid,
                              const std::vector<double>& time_grid, double dt = default_dt) {
  return success_hull(instance_id, chi_grid, time_grid, tebd_runner(instance, truth, dt));
}

}  // namespace mpsanneal
