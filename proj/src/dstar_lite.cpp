// SPDX-License-Identifier: Apache-2.0

#include "tnav/dstar_lite.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tnav/timing.hpp"

namespace tnav {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DStarLite::DStarLite(CostMap costmap, Cell start, Cell goal, const PlannerConfig& cfg, std::optional<RegionMask> mask)
    : costmap_(std::move(costmap)), mask_(std::move(mask)), cfg_(cfg), start_(start), goal_(goal), last_(start) {
  cfg_.validate();
  if (!costmap_.contains(start) || !costmap_.contains(goal)) throw std::invalid_argument("endpoint off the map");
  if (start == goal) throw std::invalid_argument("start and goal coincide");
  if (mask_ && !mask_->same_shape(costmap_)) throw std::invalid_argument("mask shape differs from cost map");

  Stopwatch clock;
  const std::size_t n = costmap_.size();
  g_.assign(n, kInf);
  rhs_.assign(n, kInf);
  in_open_.assign(n, 0);
  open_key_.assign(n, Key{kInf, kInf});

  const std::size_t goal_index = costmap_.index(goal_);
  rhs_[goal_index] = 0.0;
  open_key_[goal_index] = calc_key(goal_index);
  in_open_[goal_index] = 1;
  open_.push({open_key_[goal_index], static_cast<std::uint32_t>(goal_index)});
  result_.telemetry.graphing_time = clock.seconds();
  result_.telemetry.graph_nodes = n;

  clock.reset();
  compute_shortest_path();
  finish(clock.seconds());
}

bool DStarLite::blocked(std::size_t i) const noexcept {
  return costmap_[i] >= cfg_.obstacle_threshold || (mask_ && (*mask_)[i] == 0);
}

double DStarLite::edge_cost(std::size_t from, std::size_t to) const noexcept {
  if (blocked(from) || blocked(to)) return kInf;
  const Cell a = costmap_.cell(from);
  const Cell b = costmap_.cell(to);
  const double len = (a.x != b.x && a.y != b.y) ? std::numbers::sqrt2 : 1.0;
  return len + cfg_.omega * (costmap_[from] + costmap_[to]);
}

double DStarLite::heuristic(std::size_t i) const noexcept { return euclidean_distance(start_, costmap_.cell(i)); }

DStarLite::Key DStarLite::calc_key(std::size_t i) const noexcept {
  const double m = std::min(g_[i], rhs_[i]);
  return Key{m + heuristic(i) + km_, m};
}

void DStarLite::update_vertex(std::size_t i) {
  if (i != costmap_.index(goal_)) {
    double best = kInf;
    if (!blocked(i)) {
      const Cell c = costmap_.cell(i);
      for (const Cell d : kNeighborOffsets) {
        const Cell nb{c.x + d.x, c.y + d.y};
        if (!costmap_.contains(nb)) continue;
        const std::size_t j = costmap_.index(nb);
        if (g_[j] == kInf) continue;
        best = std::min(best, edge_cost(i, j) + g_[j]);
      }
    }
    rhs_[i] = best;
  }
  in_open_[i] = 0;
  if (g_[i] != rhs_[i]) {
    open_key_[i] = calc_key(i);
    in_open_[i] = 1;
    open_.push({open_key_[i], static_cast<std::uint32_t>(i)});
  }
}

void DStarLite::touch_with_neighbors(std::size_t i) {
  update_vertex(i);
  const Cell c = costmap_.cell(i);
  for (const Cell d : kNeighborOffsets) {
    const Cell nb{c.x + d.x, c.y + d.y};
    if (costmap_.contains(nb)) update_vertex(costmap_.index(nb));
  }
}

bool DStarLite::top(Entry& out) {
  while (!open_.empty()) {
    const Entry e = open_.top();
    if (in_open_[e.node] && open_key_[e.node] == e.key) {
      out = e;
      return true;
    }
    open_.pop();
  }
  return false;
}

void DStarLite::compute_shortest_path() {
  const std::size_t s = costmap_.index(start_);
  if (blocked(s)) return;
  Entry e{};
  while (top(e) && (e.key < calc_key(s) || rhs_[s] != g_[s])) {
    const std::size_t u = e.node;
    const Key k_new = calc_key(u);
    if (e.key < k_new) {
      open_.pop();
      open_key_[u] = k_new;
      open_.push({k_new, e.node});
      continue;
    }
    open_.pop();
    in_open_[u] = 0;
    ++expansions_;
    const Cell c = costmap_.cell(u);
    if (g_[u] > rhs_[u]) {
      g_[u] = rhs_[u];
    } else {
      g_[u] = kInf;
      update_vertex(u);
    }
    for (const Cell d : kNeighborOffsets) {
      const Cell nb{c.x + d.x, c.y + d.y};
      if (costmap_.contains(nb)) update_vertex(costmap_.index(nb));
    }
  }
}

void DStarLite::finish(double search_time) {
  result_.telemetry.search_time = search_time;
  result_.telemetry.expansions = expansions_;
  total_expansions_ += expansions_;
  expansions_ = 0;
  result_.path.cells.clear();
  result_.stats = PathStats{};

  const std::size_t s = costmap_.index(start_);
  if (costmap_[s] >= cfg_.obstacle_threshold) {
    result_.status = PlanStatus::kStartBlocked;
    return;
  }
  if (costmap_[goal_] >= cfg_.obstacle_threshold) {
    result_.status = PlanStatus::kGoalBlocked;
    return;
  }
  if (mask_ && (!mask_->inside(start_) || !mask_->inside(goal_))) {
    result_.status = PlanStatus::kOutsideMask;
    return;
  }
  if (g_[s] == kInf) {
    result_.status = PlanStatus::kNoPath;
    return;
  }

  // Greedy descent on c(u, v) + g(v); g is exact along the optimal path after compute_shortest_path.
  const std::size_t goal_index = costmap_.index(goal_);
  std::size_t cur = s;
  result_.path.cells.push_back(start_);
  while (cur != goal_index) {
    const Cell c = costmap_.cell(cur);
    double best = kInf;
    std::size_t next = cur;
    for (const Cell d : kNeighborOffsets) {
      const Cell nb{c.x + d.x, c.y + d.y};
      if (!costmap_.contains(nb)) continue;
      const std::size_t j = costmap_.index(nb);
      const double v = edge_cost(cur, j) + g_[j];
      if (v < best || (v == best && j < next)) {
        best = v;
        next = j;
      }
    }
    if (best == kInf || result_.path.cells.size() > costmap_.size()) {
      result_.path.cells.clear();
      result_.status = PlanStatus::kNoPath;
      return;
    }
    cur = next;
    result_.path.cells.push_back(costmap_.cell(cur));
  }
  result_.status = PlanStatus::kOk;
  result_.stats = path_stats(result_.path, costmap_, cfg_.omega, cfg_.obstacle_threshold);
}

const PlanResult& DStarLite::apply_changes_and_replan(std::span<const CellChange> changes, Cell new_start) {
  return replace_mask_and_replan(mask_, changes, new_start);
}

const PlanResult& DStarLite::replace_mask_and_replan(std::optional<RegionMask> mask, std::span<const CellChange> changes,
                                                     Cell new_start) {
  if (!costmap_.contains(new_start)) throw std::invalid_argument("new start off the map");
  if (new_start == goal_) throw std::invalid_argument("new start coincides with goal");
  if (mask && !mask->same_shape(costmap_)) throw std::invalid_argument("mask shape differs from cost map");
  for (const CellChange& ch : changes)
    if (!costmap_.contains(ch.cell)) throw std::invalid_argument("changed cell off the map");

  Stopwatch clock;
  km_ += euclidean_distance(last_, new_start);
  last_ = new_start;
  start_ = new_start;

  std::vector<std::size_t> dirty;
  const bool had_mask = mask_.has_value();
  if (had_mask || mask) {
    const std::optional<RegionMask> old = std::move(mask_);
    mask_ = std::move(mask);
    for (std::size_t i = 0; i < costmap_.size(); ++i) {
      const bool was_in = !old || (*old)[i] != 0;
      const bool now_in = !mask_ || (*mask_)[i] != 0;
      if (was_in != now_in) dirty.push_back(i);
    }
  }
  for (const CellChange& ch : changes) {
    const std::size_t i = costmap_.index(ch.cell);
    if (costmap_[i] == ch.cost) continue;
    costmap_[i] = ch.cost;
    dirty.push_back(i);
  }
  for (std::size_t i : dirty) touch_with_neighbors(i);

  compute_shortest_path();
  finish(clock.seconds());
  return result_;
}

}  // namespace tnav
