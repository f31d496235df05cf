// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tnav/dstar_lite.hpp"

namespace {

using tnav::Cell;
using tnav::CellChange;
using tnav::CostMap;
using tnav::DStarLite;
using tnav::PlannerConfig;

PlannerConfig cfg_default() { return PlannerConfig{}; }

void expect_matches_astar(const DStarLite& d, const CostMap& map, Cell start, Cell goal,
                          const tnav::RegionMask* mask = nullptr) {
  const auto fresh = tnav::astar_plan(map, start, goal, cfg_default(), mask);
  ASSERT_EQ(d.result().ok(), fresh.ok()) << tnav::to_string(d.result().status);
  if (fresh.ok()) {
    EXPECT_NEAR(d.result().stats.weighted_cost, fresh.stats.weighted_cost, 1e-9);
    EXPECT_EQ(d.result().path.cells.front(), start);
    EXPECT_EQ(d.result().path.cells.back(), goal);
    const auto recomputed = tnav::path_stats(d.result().path, map, cfg_default().omega);
    EXPECT_NEAR(recomputed.weighted_cost, d.result().stats.weighted_cost, 1e-12);
  }
}

TEST(DStarLite, StaticMapsMatchAstar) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3; ++i) {
    const CostMap c = oracle::random_costs(rng, 32, 32, 0.15);
    const Cell s{0, 0}, g{31, 31};
    CostMap m = c;
    m[s] = 0.0;
    m[g] = 0.0;
    const DStarLite d(m, s, g, cfg_default());
    expect_matches_astar(d, m, s, g);
  }
}

TEST(DStarLite, ZeroCostMapOctile) {
  const DStarLite d(CostMap(10, 10, 0.0), Cell{1, 2}, Cell{8, 5}, cfg_default());
  ASSERT_TRUE(d.result().ok());
  EXPECT_NEAR(d.result().stats.length, tnav::octile_distance(Cell{1, 2}, Cell{8, 5}), 1e-12);
}

TEST(DStarLite, EmptyChangeSetMovesStart) {
  std::mt19937_64 rng(8);
  CostMap m = oracle::random_costs(rng, 24, 24, 0.0);
  DStarLite d(m, Cell{0, 0}, Cell{23, 20}, cfg_default());
  const Cell next = d.result().path.cells[5];
  d.apply_changes_and_replan({}, next);
  expect_matches_astar(d, m, next, Cell{23, 20});
}

TEST(DStarLite, OffPathObstacleKeepsPath) {
  CostMap m(20, 20, 0.1);
  DStarLite d(m, Cell{0, 10}, Cell{19, 10}, cfg_default());
  const tnav::GridPath before = d.result().path;
  const double cost_before = d.result().stats.weighted_cost;
  const std::vector<CellChange> changes{{Cell{5, 0}, 1.0}, {Cell{6, 0}, 1.0}, {Cell{5, 1}, 1.0}};
  d.apply_changes_and_replan(changes, Cell{0, 10});
  EXPECT_EQ(d.result().path, before);
  EXPECT_DOUBLE_EQ(d.result().stats.weighted_cost, cost_before);
}

TEST(DStarLite, BlockingChangesMatchFreshAstar) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int scenario = 0; scenario < 20; ++scenario) {
    const int n = 24 + scenario % 3 * 8;
    CostMap m = oracle::random_costs(rng, n, n, 0.08);
    const Cell goal{n - 1, n / 2};
    Cell pos{0, n / 2};
    m[pos] = 0.0;
    m[goal] = 0.0;
    DStarLite d(m, pos, goal, cfg_default());
    if (!d.result().ok()) continue;
    for (int frame = 0; frame < 4 && d.result().ok(); ++frame) {
      const tnav::GridPath path = d.result().path;
      const std::size_t advance = std::min<std::size_t>(3, path.size() - 1);
      pos = path.cells[advance];
      if (pos == goal) break;
      std::vector<CellChange> changes;
      // Block a stretch of the remaining path and perturb random cells up and down.
      for (std::size_t k = advance + 2; k < std::min(path.size() - 1, advance + 5); ++k)
        changes.push_back({path.cells[k], 1.0});
      for (int k = 0; k < 15; ++k) {
        const Cell c{static_cast<int>(u(rng) * n), static_cast<int>(u(rng) * n)};
        if (c == pos || c == goal) continue;
        changes.push_back({c, u(rng) < 0.3 ? 1.0 : u(rng) * 0.5});
      }
      for (const CellChange& ch : changes) m[ch.cell] = ch.cost;
      d.apply_changes_and_replan(changes, pos);
      SCOPED_TRACE("scenario " + std::to_string(scenario) + " frame " + std::to_string(frame));
      expect_matches_astar(d, m, pos, goal);
      EXPECT_EQ(d.cost_map(), m);
    }
  }
}

TEST(DStarLite, MaskedMatchesMaskedAstar) {
  std::mt19937_64 rng(12);
  const CostMap m = oracle::random_costs(rng, 16, 16, 0.0);
  tnav::RegionMask mask(16, 16, 0);
  for (int x = 0; x < 16; ++x) mask[Cell{x, 15}] = mask[Cell{x, 14}] = 1;
  for (int y = 0; y < 16; ++y) mask[Cell{0, y}] = mask[Cell{15, y}] = 1;
  DStarLite d(m, Cell{0, 0}, Cell{15, 0}, cfg_default(), mask);
  expect_matches_astar(d, m, Cell{0, 0}, Cell{15, 0}, &mask);

  d.replace_mask_and_replan(std::nullopt, {}, Cell{0, 0});
  expect_matches_astar(d, m, Cell{0, 0}, Cell{15, 0});

  tnav::RegionMask narrow = mask;
  for (int x = 0; x < 16; ++x) narrow[Cell{x, 14}] = 0;
  d.replace_mask_and_replan(narrow, {}, Cell{0, 1});
  expect_matches_astar(d, m, Cell{0, 1}, Cell{15, 0}, &narrow);
}

TEST(DStarLite, BlockedStartAndRecovery) {
  CostMap m(8, 8, 0.0);
  DStarLite d(m, Cell{0, 0}, Cell{7, 7}, cfg_default());
  ASSERT_TRUE(d.result().ok());
  const std::vector<CellChange> block{{Cell{2, 2}, 1.0}};
  d.apply_changes_and_replan(block, Cell{2, 2});
  EXPECT_EQ(d.result().status, tnav::PlanStatus::kStartBlocked);
  const std::vector<CellChange> clear{{Cell{2, 2}, 0.0}};
  d.apply_changes_and_replan(clear, Cell{2, 2});
  m[Cell{2, 2}] = 0.0;
  expect_matches_astar(d, m, Cell{2, 2}, Cell{7, 7});
}

TEST(DStarLite, WallMakesGoalUnreachable) {
  CostMap m(8, 8, 0.0);
  DStarLite d(m, Cell{0, 0}, Cell{7, 7}, cfg_default());
  std::vector<CellChange> wall;
  for (int y = 0; y < 8; ++y) wall.push_back({Cell{4, y}, 1.0});
  d.apply_changes_and_replan(wall, Cell{0, 0});
  EXPECT_EQ(d.result().status, tnav::PlanStatus::kNoPath);
  for (auto& ch : wall) ch.cost = 0.0;
  d.apply_changes_and_replan(wall, Cell{1, 1});
  EXPECT_TRUE(d.result().ok());
}

TEST(DStarLite, InputErrors) {
  const CostMap m(4, 4, 0.0);
  EXPECT_THROW(DStarLite(m, Cell{0, 0}, Cell{0, 0}, cfg_default()), std::invalid_argument);
  EXPECT_THROW(DStarLite(m, Cell{0, 0}, Cell{9, 0}, cfg_default()), std::invalid_argument);
  EXPECT_THROW(DStarLite(m, Cell{0, 0}, Cell{3, 3}, cfg_default(), tnav::RegionMask(2, 2, 1)), std::invalid_argument);
  DStarLite d(m, Cell{0, 0}, Cell{3, 3}, cfg_default());
  const std::vector<CellChange> off{{Cell{5, 5}, 1.0}};
  EXPECT_THROW(d.apply_changes_and_replan(off, Cell{0, 0}), std::invalid_argument);
}

TEST(DStarLite, ReplanIsCheaperThanInitialSearch) {
  std::mt19937_64 rng(77);
  CostMap m = oracle::random_costs(rng, 64, 64, 0.05);
  m[Cell{0, 32}] = m[Cell{63, 32}] = 0.0;
  DStarLite d(m, Cell{0, 32}, Cell{63, 32}, cfg_default());
  const std::size_t initial = d.total_expansions();
  ASSERT_GT(initial, 0u);
  const Cell next = d.result().path.cells[2];
  d.apply_changes_and_replan({}, next);
  EXPECT_LT(d.total_expansions() - initial, initial);
}

}  // namespace
