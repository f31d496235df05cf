// SPDX-License-Identifier: Apache-2.0

#include "tnav/dynamic_sim.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "tnav/dstar_lite.hpp"
#include "tnav/random.hpp"
#include "tnav/terrain.hpp"
#include "tnav/timing.hpp"

namespace tnav {

namespace {

template <class F>
double timed(F&& f) {
  Stopwatch clock;
  f();
  return clock.seconds();
}

std::vector<CellChange> diff_maps(const CostMap& before, const CostMap& after) {
  std::vector<CellChange> changes;
  for (std::size_t i = 0; i < before.size(); ++i)
    if (before[i] != after[i]) changes.push_back({after.cell(i), after[i]});
  return changes;
}

Cell nearest_free(const CostMap& cost, double fx, double fy) {
  const double tx = fx * (cost.width() - 1);
  const double ty = fy * (cost.height() - 1);
  Cell best{-1, -1};
  double best_d = std::numeric_limits<double>::infinity();
  for (int y = 0; y < cost.height(); ++y)
    for (int x = 0; x < cost.width(); ++x) {
      if (cost[Cell{x, y}] >= 1.0) continue;
      const double d = (x - tx) * (x - tx) + (y - ty) * (y - ty);
      if (d < best_d) best_d = d, best = Cell{x, y};
    }
  if (best.x < 0) throw std::runtime_error("map has no traversable cell");
  return best;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace

Cell MovingObstacle::position_at(int frame, int map_width, int map_height) const {
  return Cell{std::clamp(origin.x + frame * velocity.x, 0, std::max(0, map_width - width)),
              std::clamp(origin.y + frame * velocity.y, 0, std::max(0, map_height - height))};
}

void DynamicScenario::validate() const {
  if (!base.contains(start) || !base.contains(goal)) throw std::invalid_argument("scenario endpoints off the map");
  if (start == goal) throw std::invalid_argument("scenario start and goal coincide");
  if (steps_per_replan < 1) throw std::invalid_argument("steps_per_replan must be >= 1");
  if (max_frames < 1) throw std::invalid_argument("max_frames must be >= 1");
  for (const MovingObstacle& o : obstacles)
    if (o.width < 1 || o.height < 1 || o.width > base.width() || o.height > base.height())
      throw std::invalid_argument("obstacle does not fit on the map");
}

CostMap scenario_frame(const DynamicScenario& scenario, int frame, Cell agent) {
  CostMap map = scenario.base;
  for (const MovingObstacle& o : scenario.obstacles) {
    const Cell p = o.position_at(frame, map.width(), map.height());
    for (int y = p.y; y < p.y + o.height; ++y)
      for (int x = p.x; x < p.x + o.width; ++x) {
        const Cell c{x, y};
        if (c != scenario.goal && c != agent) map[c] = 1.0;
      }
  }
  return map;
}

FrameRegionSource oracle_frame_region(double omega, int radius, double blur_sigma) {
  return [=](const CostMap& map, Cell start, Cell goal) {
    PlannerConfig cfg;
    cfg.omega = omega;
    cfg.graph_mode = GraphMode::kLazy;
    const PlanResult plan = astar_plan(map, start, goal, cfg);
    if (!plan.ok()) return ProbabilityMap(map.width(), map.height(), 1.0);
    return oracle_region(plan.path, map.width(), map.height(), radius, blur_sigma);
  };
}

FrameRegionSource static_frame_region(ProbabilityMap prob) {
  return [prob = std::move(prob)](const CostMap& map, Cell, Cell) {
    if (!prob.same_shape(map)) throw std::invalid_argument("probability map shape differs from scenario map");
    return prob;
  };
}

DynamicRunReport dynamic_sim(const DynamicScenario& scenario, Method method, const FrameRegionSource* region,
                             const SimOptions& options) {
  scenario.validate();
  if (uses_region(method) && (region == nullptr || !*region))
    throw std::invalid_argument(std::string(to_string(method)) + " needs a region source");

  const PlannerConfig& cfg = options.cfg;
  DynamicRunReport report;
  report.method = method;

  Cell pos = scenario.start;
  CostMap map = scenario_frame(scenario, 0, pos);
  std::optional<DStarLite> dstar;
  GridPath current;

  auto plan_frame = [&](int frame, std::string trigger, const std::vector<CellChange>& changes) {
    FrameRecord rec;
    rec.frame = frame;
    rec.position = pos;
    rec.trigger = std::move(trigger);

    std::optional<ProbabilityMap> prob;
    if (uses_region(method)) rec.region_time = timed([&] { prob = (*region)(map, pos, scenario.goal); });

    PlanResult plan;
    switch (method) {
      case Method::kAstar:
        rec.at = timed([&] { plan = astar_plan(map, pos, scenario.goal, cfg); });
        break;
      case Method::kAstarNN: {
        RegionPlanResult rp;
        rec.at = timed([&] { rp = region_plan(map, *prob, pos, scenario.goal, cfg, options.policy, true); });
        rec.mask_area = rp.threshold.mask.area();
        rec.full_map_fallback = rp.full_map_fallback;
        plan = std::move(rp.plan);
        break;
      }
      case Method::kDstar:
        rec.at = timed([&] {
          if (!dstar)
            dstar.emplace(map, pos, scenario.goal, cfg);
          else
            dstar->apply_changes_and_replan(changes, pos);
        });
        plan = dstar->result();
        break;
      case Method::kDstarNN: {
        ThresholdResult th;
        rec.at = timed([&] {
          th = adaptive_threshold(*prob, pos, scenario.goal, options.policy);
          if (!dstar)
            dstar.emplace(map, pos, scenario.goal, cfg, th.mask);
          else
            dstar->replace_mask_and_replan(th.mask, changes, pos);
          if (!dstar->result().ok() && !th.fallback) {
            dstar->replace_mask_and_replan(std::nullopt, {}, pos);
            rec.full_map_fallback = true;
          }
        });
        rec.mask_area = th.mask.area();
        plan = dstar->result();
        break;
      }
    }

    if (options.verify_with_astar) {
      PlanResult oracle;
      rec.oracle_time = timed([&] { oracle = astar_plan(map, pos, scenario.goal, cfg); });
      if (oracle.ok()) {
        rec.oracle_weighted_cost = oracle.stats.weighted_cost;
        if (rec.mask_area && *rec.mask_area > 0)
          rec.mm = static_cast<double>(oracle.path.size()) / static_cast<double>(*rec.mask_area);
      }
      report.total_oracle_time += rec.oracle_time;
    }

    rec.success = plan.ok();
    rec.expansions = plan.telemetry.expansions;
    if (rec.success) {
      rec.cc = plan.stats.cc;
      rec.length = plan.stats.length;
      rec.weighted_cost = plan.stats.weighted_cost;
      rec.path = plan.path;
      current = plan.path;
    } else {
      report.failure = "frame " + std::to_string(frame) + ": " + std::string(to_string(plan.status));
    }
    report.total_at += rec.at;
    report.frames.push_back(std::move(rec));
    return report.frames.back().success;
  };

  report.executed.cells.push_back(pos);
  report.executed_cc += map[pos];
  if (!plan_frame(0, "initial", {})) return report;

  for (int frame = 0;;) {
    std::size_t idx = 1;
    for (int steps = 0; steps < scenario.steps_per_replan && idx < current.size(); ++steps, ++idx) {
      pos = current.cells[idx];
      report.executed.cells.push_back(pos);
      report.executed_cc += map[pos];
    }
    if (pos == scenario.goal) {
      report.reached_goal = true;
      break;
    }
    if (++frame > scenario.max_frames) {
      report.failure = "frame budget exhausted";
      break;
    }

    CostMap next = scenario_frame(scenario, frame, pos);
    const std::vector<CellChange> changes = diff_maps(map, next);
    map = std::move(next);

    bool blocked = false;
    for (std::size_t i = idx - 1; i < current.size() && !blocked; ++i) blocked = map[current.cells[i]] >= cfg.obstacle_threshold;
    if (!plan_frame(frame, blocked ? "blocked" : "scheduled", changes)) break;
  }
  return report;
}

DynamicScenario make_dynamic_scenario(std::uint64_t seed, int size, bool with_obstacles) {
  if (size < 32) throw std::invalid_argument("dynamic scenarios need size >= 32");
  const double s = size;
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    DynamicScenario sc;
    sc.base = compute_cost_map(synth_terrain(rng(), size, 1.0));
    sc.start = nearest_free(sc.base, 0.08, 0.5 + uniform(rng, -0.15, 0.15));
    sc.goal = nearest_free(sc.base, 0.92, 0.5 + uniform(rng, -0.15, 0.15));
    sc.steps_per_replan = 45;
    sc.max_frames = 64;

    if (with_obstacles) {
      const int mid_y = (sc.start.y + sc.goal.y) / 2;
      MovingObstacle upper;
      upper.width = static_cast<int>(uniform(rng, 0.08, 0.14) * s);
      upper.height = static_cast<int>(uniform(rng, 0.25, 0.4) * s);
      upper.origin = Cell{static_cast<int>(uniform(rng, 0.45, 0.7) * s),
                          mid_y - upper.height + static_cast<int>(uniform(rng, 0.05, 0.12) * s)};
      upper.velocity = Cell{-std::max(1, static_cast<int>(uniform(rng, 0.03, 0.07) * s)), 0};
      MovingObstacle lower;
      lower.width = static_cast<int>(uniform(rng, 0.08, 0.14) * s);
      lower.height = static_cast<int>(uniform(rng, 0.25, 0.4) * s);
      lower.origin = Cell{static_cast<int>(uniform(rng, 0.2, 0.45) * s),
                          mid_y - static_cast<int>(uniform(rng, 0.05, 0.12) * s)};
      lower.velocity = Cell{std::max(1, static_cast<int>(uniform(rng, 0.03, 0.07) * s)), 0};
      for (MovingObstacle* o : {&upper, &lower}) {
        const Cell p = o->position_at(0, size, size);
        o->origin = p;
      }
      sc.obstacles = {upper, lower};
    }

    SimOptions opts;
    opts.cfg.graph_mode = GraphMode::kLazy;
    const DynamicRunReport probe = dynamic_sim(sc, Method::kAstar, nullptr, opts);
    if (!probe.reached_goal) continue;
    if (with_obstacles &&
        std::none_of(probe.frames.begin(), probe.frames.end(), [](const FrameRecord& f) { return f.trigger == "blocked"; }))
      continue;
    return sc;
  }
  throw std::runtime_error("could not build a valid dynamic scenario for seed " + std::to_string(seed));
}

void write_dynamic_csv(std::ostream& out, std::span<const DynamicRunReport> runs) {
  out << "method,frame,x,y,trigger,success,at_s,region_time_s,cc,length,weighted_cost,oracle_weighted_cost,"
         "oracle_time_s,mask_area,mm,expansions,full_map_fallback\n";
  out << std::setprecision(12);
  for (const DynamicRunReport& run : runs)
    for (const FrameRecord& f : run.frames) {
      out << to_string(run.method) << ',' << f.frame << ',' << f.position.x << ',' << f.position.y << ',' << f.trigger
          << ',' << (f.success ? 1 : 0) << ',' << f.at << ',' << f.region_time << ',' << f.cc << ',' << f.length << ','
          << f.weighted_cost << ',';
      if (f.oracle_weighted_cost) out << *f.oracle_weighted_cost;
      out << ',' << f.oracle_time << ',';
      if (f.mask_area) out << *f.mask_area;
      out << ',';
      if (f.mm) out << *f.mm;
      out << ',' << f.expansions << ',' << (f.full_map_fallback ? 1 : 0) << '\n';
    }
}

}  // namespace tnav
