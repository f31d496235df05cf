// SPDX-License-Identifier: Apache-2.0

#include "tnav/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "tnav/timing.hpp"

namespace tnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct OpenEntry {
  double f;
  double g;
  std::uint32_t node;
};

// Pops the smallest f; ties prefer the larger g, then the smaller node id. Node ids are
// increasing in the row-major cell index in both graph representations.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const noexcept {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.node > b.node;
  }
};

using OpenList = std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder>;

bool active_cell(const CostMap& costmap, const RegionMask* mask, double threshold, std::size_t i) {
  return costmap[i] < threshold && (mask == nullptr || (*mask)[i] != 0);
}

// Every active node and its outgoing edges in CSR form, plus the per-node search state.
class PrebuiltGraph {
 public:
  PrebuiltGraph(const CostMap& costmap, const RegionMask* mask, const PlannerConfig& cfg)
      : width_(costmap.width()), node_of_(costmap.size(), kNone) {
    const std::size_t n = costmap.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (active_cell(costmap, mask, cfg.obstacle_threshold, i)) {
        node_of_[i] = static_cast<std::uint32_t>(cell_of_.size());
        cell_of_.push_back(static_cast<std::uint32_t>(i));
      }
    }
    const std::size_t count = cell_of_.size();
    offsets_.reserve(count + 1);
    targets_.reserve(count * 8);
    costs_.reserve(count * 8);
    offsets_.push_back(0);
    for (std::size_t node = 0; node < count; ++node) {
      const Cell c = costmap.cell(cell_of_[node]);
      const double tc = costmap[cell_of_[node]];
      for (const Cell d : kNeighborOffsets) {
        const Cell nb{c.x + d.x, c.y + d.y};
        if (!costmap.contains(nb)) continue;
        const std::uint32_t nb_node = node_of_[costmap.index(nb)];
        if (nb_node == kNone) continue;
        const double len = (d.x != 0 && d.y != 0) ? std::numbers::sqrt2 : 1.0;
        targets_.push_back(nb_node);
        costs_.push_back(len + cfg.omega * (tc + costmap[nb]));
      }
      offsets_.push_back(static_cast<std::uint32_t>(targets_.size()));
    }
    g_.assign(count, kInf);
    parent_.assign(count, kNone);
    closed_.assign(count, 0);
  }

  std::size_t node_count() const noexcept { return cell_of_.size(); }
  std::uint32_t node_of(std::size_t cell_index) const noexcept { return node_of_[cell_index]; }
  std::size_t cell_index(std::uint32_t node) const noexcept { return cell_of_[node]; }
  Cell cell(std::uint32_t node) const noexcept {
    return Cell{static_cast<int>(cell_of_[node] % width_), static_cast<int>(cell_of_[node] / width_)};
  }

  template <class F>
  void for_each_edge(std::uint32_t node, F&& f) const {
    for (std::uint32_t e = offsets_[node]; e < offsets_[node + 1]; ++e) f(targets_[e], costs_[e]);
  }

  std::vector<double> g_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> closed_;

 private:
  std::size_t width_;
  std::vector<std::uint32_t> node_of_;
  std::vector<std::uint32_t> cell_of_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> targets_;
  std::vector<double> costs_;
};

// Nodes are raw cell indices; edges are generated on expansion.
class LazyGraph {
 public:
  LazyGraph(const CostMap& costmap, const RegionMask* mask, const PlannerConfig& cfg)
      : costmap_(costmap), mask_(mask), cfg_(cfg) {
    g_.assign(costmap.size(), kInf);
    parent_.assign(costmap.size(), kNone);
    closed_.assign(costmap.size(), 0);
  }

  std::uint32_t node_of(std::size_t cell_index) const noexcept {
    return active_cell(costmap_, mask_, cfg_.obstacle_threshold, cell_index) ? static_cast<std::uint32_t>(cell_index)
                                                                             : kNone;
  }
  std::size_t cell_index(std::uint32_t node) const noexcept { return node; }
  Cell cell(std::uint32_t node) const noexcept { return costmap_.cell(node); }

  template <class F>
  void for_each_edge(std::uint32_t node, F&& f) const {
    const Cell c = costmap_.cell(node);
    const double tc = costmap_[static_cast<std::size_t>(node)];
    for (const Cell d : kNeighborOffsets) {
      const Cell nb{c.x + d.x, c.y + d.y};
      if (!costmap_.contains(nb)) continue;
      const std::size_t idx = costmap_.index(nb);
      if (!active_cell(costmap_, mask_, cfg_.obstacle_threshold, idx)) continue;
      const double len = (d.x != 0 && d.y != 0) ? std::numbers::sqrt2 : 1.0;
      f(static_cast<std::uint32_t>(idx), len + cfg_.omega * (tc + costmap_[idx]));
    }
  }

  std::vector<double> g_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> closed_;

 private:
  const CostMap& costmap_;
  const RegionMask* mask_;
  const PlannerConfig& cfg_;
};

template <class Graph>
bool run_search(Graph& graph, std::uint32_t start, std::uint32_t goal, Cell goal_cell, SearchTelemetry& telemetry,
                std::size_t& touched) {
  OpenList open;
  graph.g_[start] = 0.0;
  touched = 1;
  open.push({euclidean_distance(graph.cell(start), goal_cell), 0.0, start});
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (graph.closed_[top.node] || top.g != graph.g_[top.node]) continue;
    graph.closed_[top.node] = 1;
    ++telemetry.expansions;
    if (top.node == goal) return true;
    graph.for_each_edge(top.node, [&](std::uint32_t nb, double cost) {
      if (graph.closed_[nb]) return;
      const double g = top.g + cost;
      if (g < graph.g_[nb]) {
        if (graph.g_[nb] == kInf) ++touched;
        graph.g_[nb] = g;
        graph.parent_[nb] = top.node;
        open.push({g + euclidean_distance(graph.cell(nb), goal_cell), g, nb});
      }
    });
  }
  return false;
}

template <class Graph>
GridPath trace_back(const Graph& graph, std::uint32_t goal) {
  GridPath path;
  for (std::uint32_t n = goal; n != kNone; n = graph.parent_[n]) path.cells.push_back(graph.cell(n));
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

}  // namespace

void PlannerConfig::validate() const {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be a finite value >= 0");
  if (!(obstacle_threshold > 0.0 && obstacle_threshold <= 1.0))
    throw std::invalid_argument("obstacle_threshold must lie in (0, 1]");
}

std::string_view to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::kOk: return "ok";
    case PlanStatus::kStartBlocked: return "start-blocked";
    case PlanStatus::kGoalBlocked: return "goal-blocked";
    case PlanStatus::kOutsideMask: return "outside-mask";
    case PlanStatus::kNoPath: return "no-path";
  }
  return "unknown";
}

double euclidean_distance(Cell a, Cell b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double octile_distance(Cell a, Cell b) noexcept {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  return std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy);
}

double step_cost(const CostMap& costmap, Cell from, Cell to, double omega) {
  if (!costmap.contains(from) || !costmap.contains(to)) throw std::invalid_argument("step endpoint off the map");
  if (!is_adjacent(from, to)) throw std::invalid_argument("step between non-adjacent cells");
  const double len = (from.x != to.x && from.y != to.y) ? std::numbers::sqrt2 : 1.0;
  return len + omega * (costmap[from] + costmap[to]);
}

PathStats path_stats(const GridPath& path, const CostMap& costmap, double omega, double obstacle_threshold) {
  if (path.empty()) throw std::invalid_argument("empty path");
  PathStats s;
  for (std::size_t i = 0; i < path.cells.size(); ++i) {
    const Cell c = path.cells[i];
    if (!costmap.contains(c)) throw std::invalid_argument("path cell " + to_string(c) + " off the map");
    if (costmap[c] >= obstacle_threshold) throw std::invalid_argument("path crosses obstacle at " + to_string(c));
    s.cc += costmap[c];
    if (i == 0) continue;
    const Cell p = path.cells[i - 1];
    if (!is_adjacent(p, c)) throw std::invalid_argument("path cells " + to_string(p) + " and " + to_string(c) + " not adjacent");
    s.length += (p.x != c.x && p.y != c.y) ? std::numbers::sqrt2 : 1.0;
    s.edge_cost_sum += costmap[p] + costmap[c];
  }
  s.weighted_cost = s.length + omega * s.edge_cost_sum;
  return s;
}

PlanResult astar_plan(const CostMap& costmap, Cell start, Cell goal, const PlannerConfig& cfg, const RegionMask* mask) {
  cfg.validate();
  if (!costmap.contains(start) || !costmap.contains(goal)) throw std::invalid_argument("endpoint off the map");
  if (start == goal) throw std::invalid_argument("start and goal coincide");
  if (mask != nullptr && !mask->same_shape(costmap)) throw std::invalid_argument("mask shape differs from cost map");

  PlanResult result;
  if (costmap[start] >= cfg.obstacle_threshold) {
    result.status = PlanStatus::kStartBlocked;
    return result;
  }
  if (costmap[goal] >= cfg.obstacle_threshold) {
    result.status = PlanStatus::kGoalBlocked;
    return result;
  }
  if (mask != nullptr && (!mask->inside(start) || !mask->inside(goal))) {
    result.status = PlanStatus::kOutsideMask;
    return result;
  }

  auto solve = [&](auto& graph, Stopwatch& clock) {
    result.telemetry.graphing_time = clock.seconds();
    clock.reset();
    const std::uint32_t s = graph.node_of(costmap.index(start));
    const std::uint32_t t = graph.node_of(costmap.index(goal));
    std::size_t touched = 0;
    const bool found = run_search(graph, s, t, goal, result.telemetry, touched);
    if (found) result.path = trace_back(graph, t);
    result.telemetry.search_time = clock.seconds();
    return std::pair{found, touched};
  };

  bool found = false;
  Stopwatch clock;
  if (cfg.graph_mode == GraphMode::kPrebuilt) {
    PrebuiltGraph graph(costmap, mask, cfg);
    found = solve(graph, clock).first;
    result.telemetry.graph_nodes = graph.node_count();
  } else {
    LazyGraph graph(costmap, mask, cfg);
    const auto [ok, touched] = solve(graph, clock);
    found = ok;
    result.telemetry.graph_nodes = touched;
  }

  if (!found) {
    result.status = PlanStatus::kNoPath;
    return result;
  }
  result.status = PlanStatus::kOk;
  result.stats = path_stats(result.path, costmap, cfg.omega, cfg.obstacle_threshold);
  return result;
}

}  // namespace tnav
