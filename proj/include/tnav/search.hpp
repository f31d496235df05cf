// SPDX-License-Identifier: Apache-2.0
//
// Weighted A* over 8-connected cost-map grids.
//
// Edge cost between adjacent cells i, j is euclid(i, j) + omega * (T_i + T_j), and the
// heuristic is the straight-line distance to the goal. With omega >= 0 the heuristic is
// consistent, so every node is expanded at most once.

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "tnav/grid.hpp"

namespace tnav {

enum class GraphMode {
  kPrebuilt,  // materialize every active node and edge before searching
  kLazy,      // generate neighbors on expansion
};

struct PlannerConfig {
  double omega = 0.011;
  double obstacle_threshold = 1.0;  // cells with cost >= threshold are excluded
  GraphMode graph_mode = GraphMode::kPrebuilt;

  void validate() const;
};

struct GridPath {
  std::vector<Cell> cells;

  bool empty() const noexcept { return cells.empty(); }
  std::size_t size() const noexcept { return cells.size(); }
  friend bool operator==(const GridPath&, const GridPath&) = default;
};

struct PathStats {
  double length = 0.0;         // L, sum of Euclidean step lengths in cells
  double cc = 0.0;             // sum of T_i over path cells
  double edge_cost_sum = 0.0;  // T_sn, sum of (T_k + T_k+1) over steps
  double weighted_cost = 0.0;  // L + omega * T_sn
};

struct SearchTelemetry {
  double graphing_time = 0.0;  // seconds
  double search_time = 0.0;    // seconds
  std::size_t expansions = 0;
  std::size_t graph_nodes = 0;
};

enum class PlanStatus {
  kOk,
  kStartBlocked,
  kGoalBlocked,
  kOutsideMask,
  kNoPath,
};

std::string_view to_string(PlanStatus status);

struct PlanResult {
  PlanStatus status = PlanStatus::kNoPath;
  GridPath path;
  PathStats stats;
  SearchTelemetry telemetry;

  bool ok() const noexcept { return status == PlanStatus::kOk; }
};

/// Euclidean step length (1 or sqrt 2) plus omega * (T_from + T_to). Throws std::invalid_argument
/// unless the cells are distinct, 8-adjacent and on the map.
double step_cost(const CostMap& costmap, Cell from, Cell to, double omega);

/// Straight-line distance between cell centers.
double euclidean_distance(Cell a, Cell b) noexcept;

/// Shortest 8-connected length on an empty grid.
double octile_distance(Cell a, Cell b) noexcept;

/// Optimal path under the weighted cost. When `mask` is given, only cells inside it are used.
/// Throws std::invalid_argument for out-of-range endpoints, start == goal, or a mask of the wrong shape.
PlanResult astar_plan(const CostMap& costmap, Cell start, Cell goal, const PlannerConfig& cfg,
                      const RegionMask* mask = nullptr);

/// Throws std::invalid_argument if the path is empty, leaves the map, breaks adjacency, or
/// visits a cell with cost >= obstacle_threshold.
PathStats path_stats(const GridPath& path, const CostMap& costmap, double omega, double obstacle_threshold = 1.0);

}  // namespace tnav
