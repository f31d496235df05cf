// SPDX-License-Identifier: Apache-2.0
//
// Dynamic-obstacle scenarios: an agent follows its plan for a fixed number of cells per frame,
// the map changes (rectangular obstacles of cost 1 move), and the planner replans from the
// agent's current cell.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tnav/calibration.hpp"
#include "tnav/grid.hpp"
#include "tnav/region.hpp"
#include "tnav/search.hpp"

namespace tnav {

struct MovingObstacle {
  Cell origin;  // top-left corner at frame 0
  int width = 1;
  int height = 1;
  Cell velocity;  // cells per frame

  /// Top-left corner at `frame`, clamped so the rectangle stays on a map of the given size.
  Cell position_at(int frame, int map_width, int map_height) const;
};

struct DynamicScenario {
  CostMap base;
  std::vector<MovingObstacle> obstacles;
  Cell start;
  Cell goal;
  int steps_per_replan = 45;
  int max_frames = 64;

  void validate() const;
};

/// Map at `frame`: the base costs with every obstacle rectangle set to 1. The goal and the agent's
/// current cell are never overwritten.
CostMap scenario_frame(const DynamicScenario& scenario, int frame, Cell agent);

/// Synthetic scenario with two obstacles crossing the start-goal corridor, the upper one moving
/// left and the lower one moving right. Candidates are drawn until a plain A* run reaches the
/// goal and meets at least one blocked path.
DynamicScenario make_dynamic_scenario(std::uint64_t seed, int size = 256, bool with_obstacles = true);

/// Probability map for the current frame, from the agent's cell to the goal.
using FrameRegionSource = std::function<ProbabilityMap(const CostMap& map, Cell start, Cell goal)>;

/// Oracle region around the frame's optimal path (computed outside the timed planning step).
FrameRegionSource oracle_frame_region(double omega = 0.011, int radius = 3, double blur_sigma = 1.0);
/// The same probability map for every frame.
FrameRegionSource static_frame_region(ProbabilityMap prob);

struct FrameRecord {
  int frame = 0;
  Cell position;
  std::string trigger;  // "initial", "blocked", or "scheduled"
  bool success = false;
  double at = 0.0;           // planning seconds for this frame
  double region_time = 0.0;  // seconds spent producing the probability map (NN methods)
  double cc = 0.0;
  double length = 0.0;
  double weighted_cost = 0.0;
  std::optional<double> oracle_weighted_cost;  // fresh full-map A* from the same state
  double oracle_time = 0.0;
  std::optional<std::size_t> mask_area;
  std::optional<double> mm;
  std::size_t expansions = 0;
  bool full_map_fallback = false;
  GridPath path;
};

struct DynamicRunReport {
  Method method = Method::kAstar;
  std::vector<FrameRecord> frames;
  GridPath executed;
  bool reached_goal = false;
  std::string failure;
  double total_at = 0.0;
  double total_oracle_time = 0.0;
  double executed_cc = 0.0;
};

struct SimOptions {
  PlannerConfig cfg;
  ThresholdPolicy policy;
  bool verify_with_astar = false;  // also run fresh full-map A* each frame and record its cost/time
};

/// Throws std::invalid_argument when an NN method is requested without a region source.
DynamicRunReport dynamic_sim(const DynamicScenario& scenario, Method method, const FrameRegionSource* region,
                             const SimOptions& options = {});

void write_dynamic_csv(std::ostream& out, std::span<const DynamicRunReport> runs);

}  // namespace tnav
