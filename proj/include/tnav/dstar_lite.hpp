// SPDX-License-Identifier: Apache-2.0
//
// Incremental replanning (D* Lite) over the same weighted 8-connected grid as astar_plan.
// The search runs backwards from the goal, so cost changes and start moves reuse the
// previous g/rhs values instead of starting over.

#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "tnav/grid.hpp"
#include "tnav/search.hpp"

namespace tnav {

struct CellChange {
  Cell cell;
  double cost = 0.0;
};

class DStarLite {
 public:
  /// Runs the initial search. Throws std::invalid_argument under the same conditions as astar_plan.
  DStarLite(CostMap costmap, Cell start, Cell goal, const PlannerConfig& cfg,
            std::optional<RegionMask> mask = std::nullopt);

  /// Result of the most recent (re)plan.
  const PlanResult& result() const noexcept { return result_; }

  /// Applies the cost changes, moves the start, and repairs the previous solution.
  const PlanResult& apply_changes_and_replan(std::span<const CellChange> changes, Cell new_start);

  /// Replaces the heuristic-region restriction (cells leaving the mask become untraversable)
  /// together with any cost changes, then repairs.
  const PlanResult& replace_mask_and_replan(std::optional<RegionMask> mask, std::span<const CellChange> changes,
                                            Cell new_start);

  const CostMap& cost_map() const noexcept { return costmap_; }
  Cell start() const noexcept { return start_; }
  Cell goal() const noexcept { return goal_; }

  /// Cumulative expansions over the lifetime of the planner.
  std::size_t total_expansions() const noexcept { return total_expansions_; }

 private:
  struct Key {
    double k1;
    double k2;
    friend bool operator<(const Key& a, const Key& b) noexcept { return a.k1 < b.k1 || (a.k1 == b.k1 && a.k2 < b.k2); }
    friend bool operator==(const Key& a, const Key& b) noexcept = default;
  };
  struct Entry {
    Key key;
    std::uint32_t node;
  };
  struct EntryOrder {
    bool operator()(const Entry& a, const Entry& b) const noexcept {
      if (a.key == b.key) return a.node > b.node;
      return b.key < a.key;
    }
  };

  bool blocked(std::size_t i) const noexcept;
  double edge_cost(std::size_t from, std::size_t to) const noexcept;
  double heuristic(std::size_t i) const noexcept;
  Key calc_key(std::size_t i) const noexcept;
  void update_vertex(std::size_t i);
  void touch_with_neighbors(std::size_t i);
  bool top(Entry& out);
  void compute_shortest_path();
  void finish(double search_time);

  CostMap costmap_;
  std::optional<RegionMask> mask_;
  PlannerConfig cfg_;
  Cell start_;
  Cell goal_;
  Cell last_;
  double km_ = 0.0;

  std::vector<double> g_;
  std::vector<double> rhs_;
  std::vector<std::uint8_t> in_open_;
  std::vector<Key> open_key_;
  std::priority_queue<Entry, std::vector<Entry>, EntryOrder> open_;

  std::size_t expansions_ = 0;
  std::size_t total_expansions_ = 0;
  PlanResult result_;
};

}  // namespace tnav
