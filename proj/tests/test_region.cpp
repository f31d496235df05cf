// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tnav/region.hpp"
#include "tnav/terrain.hpp"

namespace {

using tnav::Cell;
using tnav::GridPath;
using tnav::ProbabilityMap;
using tnav::RegionMask;

// Horizontal corridor on row `row` from x0 to x1 at probability `p`, background `bg`.
ProbabilityMap corridor(int w, int h, int row, int x0, int x1, double p, double bg) {
  ProbabilityMap m(w, h, bg);
  for (int x = x0; x <= x1; ++x) m[Cell{x, row}] = p;
  return m;
}

ProbabilityMap random_prob(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProbabilityMap m(w, h);
  for (double& v : m.values()) v = u(rng);
  return m;
}

TEST(ThresholdRegion, Basics) {
  std::mt19937_64 rng(1);
  const ProbabilityMap p = random_prob(rng, 10, 10);
  EXPECT_EQ(tnav::threshold_region(p, 0.0).area(), 100u);
  EXPECT_THROW(tnav::threshold_region(p, 1.0 + 1e-12), std::invalid_argument);
  EXPECT_THROW(tnav::threshold_region(p, -0.1), std::invalid_argument);

  ProbabilityMap q(4, 4, 0.99);
  q[Cell{1, 2}] = 1.0;
  const RegionMask top = tnav::threshold_region(q, 1.0);
  EXPECT_EQ(top.area(), 1u);
  EXPECT_TRUE(top.inside(Cell{1, 2}));

  const ProbabilityMap c = corridor(12, 7, 3, 2, 9, 0.8, 0.1);
  const RegionMask m = tnav::threshold_region(c, 0.5);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 12; ++x) EXPECT_EQ(m.inside(Cell{x, y}), y == 3 && x >= 2 && x <= 9);
}

TEST(RegionConnected, Examples) {
  const RegionMask full(8, 8, 1);
  EXPECT_TRUE(tnav::region_connected(full, Cell{0, 0}, Cell{7, 7}));
  RegionMask split = full;
  for (int x = 0; x < 8; ++x) split[Cell{x, 4}] = 0;
  EXPECT_FALSE(tnav::region_connected(split, Cell{0, 0}, Cell{7, 7}));
  EXPECT_TRUE(tnav::region_connected(split, Cell{0, 0}, Cell{7, 3}));

  RegionMask diag(3, 3, 0);
  diag[Cell{0, 0}] = diag[Cell{1, 1}] = diag[Cell{2, 2}] = 1;
  EXPECT_TRUE(tnav::region_connected(diag, Cell{0, 0}, Cell{2, 2}));
  EXPECT_FALSE(tnav::region_connected(diag, Cell{0, 0}, Cell{0, 1}));
}

TEST(RegionConnected, AgreesWithUnionFind) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> coord(0, 19);
  for (int i = 0; i < 50; ++i) {
    RegionMask m(20, 20, 0);
    const double density = 0.3 + 0.4 * u(rng);
    for (auto& v : m.values()) v = u(rng) < density;
    const Cell a{coord(rng), coord(rng)};
    const Cell b{coord(rng), coord(rng)};
    EXPECT_EQ(tnav::region_connected(m, a, b), oracle::connected(m, a, b)) << "mask " << i;
  }
}

TEST(AdaptiveThreshold, CorridorPicksCorridorValue) {
  const ProbabilityMap c = corridor(12, 7, 3, 1, 10, 0.8, 0.1);
  const Cell s{0, 3}, g{11, 3};
  const auto r = tnav::adaptive_threshold(c, s, g);
  EXPECT_NEAR(r.td, 0.80, 1e-12);
  EXPECT_FALSE(r.fallback);
  RegionMask expected = tnav::threshold_region(c, 0.8);
  expected[s] = expected[g] = 1;
  EXPECT_EQ(r.mask, expected);
  EXPECT_EQ(r.mask.area(), 12u);
}

TEST(AdaptiveThreshold, UniformAndZero) {
  const auto half = tnav::adaptive_threshold(ProbabilityMap(9, 9, 0.5), Cell{0, 0}, Cell{8, 8});
  EXPECT_NEAR(half.td, 0.5, 1e-12);
  EXPECT_EQ(half.mask.area(), 81u);
  EXPECT_FALSE(half.fallback);

  const auto zero = tnav::adaptive_threshold(ProbabilityMap(9, 9, 0.0), Cell{0, 0}, Cell{8, 8});
  EXPECT_TRUE(zero.fallback);
  EXPECT_EQ(zero.td, 0.0);
  EXPECT_EQ(zero.mask.area(), 81u);
}

TEST(AdaptiveThreshold, MaximalAndNested) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(0, 23);
  const tnav::ThresholdPolicy policy;
  const std::vector<double> sweep = tnav::threshold_sweep(policy);
  ASSERT_EQ(sweep.size(), 19u);
  EXPECT_DOUBLE_EQ(sweep.front(), 0.95);
  EXPECT_DOUBLE_EQ(sweep.back(), 0.05);
  for (int i = 0; i < 40; ++i) {
    const ProbabilityMap p = random_prob(rng, 24, 24);
    const Cell s{coord(rng), coord(rng)}, g{coord(rng), coord(rng)};
    const auto r = tnav::adaptive_threshold(p, s, g, policy);
    if (r.fallback) continue;
    EXPECT_TRUE(oracle::connected(r.mask, s, g));
    for (double td : sweep) {
      if (td <= r.td + 1e-12) break;
      RegionMask m = tnav::threshold_region(p, td);
      m[s] = m[g] = 1;
      EXPECT_FALSE(oracle::connected(m, s, g)) << "higher td " << td << " also connects";
    }
    for (std::size_t k = 1; k < sweep.size(); ++k) {
      const RegionMask hi = tnav::threshold_region(p, sweep[k - 1]);
      const RegionMask lo = tnav::threshold_region(p, sweep[k]);
      for (std::size_t j = 0; j < hi.size(); ++j)
        if (hi[j]) ASSERT_TRUE(lo[j]);
    }
  }
}

TEST(ThresholdPolicy, Validate) {
  tnav::ThresholdPolicy p;
  p.td_step = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.td_min = 0.99;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ModelMetric, Examples) {
  GridPath path;
  for (int x = 0; x < 20; ++x) path.cells.push_back(Cell{x, 0});
  RegionMask mask(20, 20, 0);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 20; ++x) mask[Cell{x, y}] = 1;
  EXPECT_EQ(tnav::model_metric(path, mask), 0.1);

  RegionMask exact(20, 20, 0);
  for (Cell c : path.cells) exact[c] = 1;
  EXPECT_EQ(tnav::model_metric(path, exact), 1.0);

  GridPath repeated = path;
  repeated.cells.push_back(Cell{19, 0});
  EXPECT_EQ(tnav::model_metric(repeated, exact), 1.0);

  EXPECT_THROW(tnav::model_metric(path, RegionMask(20, 20, 0)), std::invalid_argument);
  EXPECT_THROW(tnav::model_metric(GridPath{}, mask), std::invalid_argument);
}

TEST(ModelMetric, OracleRegionCount) {
  GridPath path;
  for (int i = 0; i < 30; ++i) path.cells.push_back(Cell{5 + i, 10 + i / 3});
  const ProbabilityMap p = tnav::oracle_region(path, 64, 64, 3, 1.0);
  const auto th = tnav::adaptive_threshold(p, path.cells.front(), path.cells.back());
  std::size_t area = 0;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) area += p[Cell{x, y}] >= th.td || Cell{x, y} == path.cells.front() ||
                                         Cell{x, y} == path.cells.back();
  const auto rep = tnav::region_report(path, th);
  EXPECT_EQ(rep.area, area);
  EXPECT_DOUBLE_EQ(rep.mm, 30.0 / static_cast<double>(area));
}

TEST(OracleRegion, UnblurredIsDilatedCorridor) {
  const GridPath path{{Cell{2, 2}, Cell{3, 3}, Cell{4, 3}}};
  const ProbabilityMap p = tnav::oracle_region(path, 8, 8, 1, 0.0);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      bool near = false;
      for (Cell c : path.cells) near = near || (std::abs(c.x - x) <= 1 && std::abs(c.y - y) <= 1);
      EXPECT_EQ(p[Cell(x, y)], near ? 1.0 : 0.0);
    }
}

TEST(OracleRegion, BlurredPeaksAtOne) {
  const GridPath path{{Cell{10, 10}, Cell{11, 10}, Cell{12, 10}}};
  const ProbabilityMap p = tnav::oracle_region(path, 24, 24, 3, 1.0);
  double mx = 0.0;
  for (double v : p.values()) {
    EXPECT_GE(v, 0.0);
    mx = std::max(mx, v);
  }
  EXPECT_DOUBLE_EQ(mx, 1.0);
  EXPECT_GT(p[Cell(11, 10)], p[Cell(11, 16)]);
}

TEST(OracleRegion, Errors) {
  EXPECT_THROW(tnav::oracle_region(GridPath{}, 8, 8, 3, 1.0), std::invalid_argument);
  EXPECT_THROW(tnav::oracle_region(GridPath{{Cell{1, 1}}}, 8, 8, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(tnav::oracle_region(GridPath{{Cell{9, 1}}}, 8, 8, 1, 1.0), std::invalid_argument);
}

TEST(OracleRegion, MaskedPlanMatchesFull) {
  tnav::PlannerConfig cfg;
  std::mt19937_64 rng(64);
  std::uniform_int_distribution<int> coord(0, 63);
  int checked = 0;
  for (int i = 0; checked < 20 && i < 200; ++i) {
    const tnav::CostMap cost = tnav::compute_cost_map(tnav::synth_terrain(rng(), 64, 1.0));
    const Cell s{coord(rng), coord(rng)}, g{coord(rng), coord(rng)};
    if (s == g) continue;
    const auto full = tnav::astar_plan(cost, s, g, cfg);
    if (!full.ok()) continue;
    ++checked;
    const ProbabilityMap p = tnav::oracle_region(full.path, 64, 64, 3, 1.0);
    const auto r = tnav::region_plan(cost, p, s, g, cfg);
    ASSERT_TRUE(r.plan.ok());
    EXPECT_FALSE(r.full_map_fallback);
    for (Cell c : full.path.cells) EXPECT_TRUE(r.threshold.mask.inside(c));
    EXPECT_NEAR(r.plan.stats.weighted_cost, full.stats.weighted_cost, 1e-9);
    EXPECT_LT(r.threshold.mask.area(), cost.size());
  }
  EXPECT_EQ(checked, 20);
}

TEST(RescaleRegion, ConstantAndPooling) {
  const ProbabilityMap c(8, 8, 0.37);
  EXPECT_EQ(tnav::rescale_region(c, 4, 4), ProbabilityMap(4, 4, 0.37));
  const ProbabilityMap up = tnav::rescale_region(c, 32, 32);
  for (double v : up.values()) EXPECT_NEAR(v, 0.37, 1e-15);

  ProbabilityMap b(2, 2, 0.0);
  b[Cell{0, 1}] = b[Cell{1, 1}] = 1.0;
  const ProbabilityMap pooled = tnav::rescale_region(b, 1, 1);
  EXPECT_EQ(pooled[0], 0.5);

  EXPECT_THROW(tnav::rescale_region(c, 3, 3), std::invalid_argument);
  EXPECT_THROW(tnav::rescale_region(c, 4, 2), std::invalid_argument);
}

TEST(RescaleRegion, RoundTripKeepsConnectivity) {
  std::mt19937_64 rng(512);
  std::uniform_int_distribution<int> coord(0, 511);
  for (int i = 0; i < 10; ++i) {
    const Cell s{coord(rng), coord(rng)}, g{coord(rng), coord(rng)};
    GridPath line;
    Cell c = s;
    line.cells.push_back(c);
    while (c != g) {
      c.x += (g.x > c.x) - (g.x < c.x);
      c.y += (g.y > c.y) - (g.y < c.y);
      line.cells.push_back(c);
    }
    const ProbabilityMap p = tnav::oracle_region(line, 512, 512, 3, 0.0);
    const ProbabilityMap back = tnav::rescale_region(tnav::rescale_region(p, 256, 256), 512, 512);
    const auto th = tnav::adaptive_threshold(back, s, g);
    EXPECT_FALSE(th.fallback);
    EXPECT_TRUE(oracle::connected(th.mask, s, g));
  }
}

TEST(DilateMask, GrowsByChebyshevRadius) {
  RegionMask m(7, 7, 0);
  m[Cell{3, 3}] = 1;
  EXPECT_EQ(tnav::dilate_mask(m, 1).area(), 9u);
  EXPECT_EQ(tnav::dilate_mask(m, 2).area(), 25u);
  EXPECT_EQ(tnav::dilate_mask(m, 0), m);
}

TEST(MultiscaleRegion, ConnectsAtFullResolution) {
  GridPath path;
  for (int x = 4; x < 60; ++x) path.cells.push_back(Cell{x, 20 + x / 4});
  const ProbabilityMap fine = tnav::oracle_region(path, 64, 64, 2, 1.0);
  const ProbabilityMap coarse = tnav::rescale_region(fine, 32, 32);
  const auto r = tnav::multiscale_region(coarse, 64, 64, path.cells.front(), path.cells.back());
  EXPECT_FALSE(r.fallback);
  EXPECT_EQ(r.mask.width(), 64);
  EXPECT_TRUE(oracle::connected(r.mask, path.cells.front(), path.cells.back()));
  for (Cell c : path.cells) EXPECT_TRUE(r.mask.inside(c));
}

TEST(RegionPlan, FallsBackToFullMap) {
  tnav::CostMap cost(10, 10, 0.0);
  for (int x = 0; x < 9; ++x) cost[Cell{x, 5}] = 1.0;  // wall with a gap at x = 9
  ProbabilityMap p(10, 10, 0.0);
  for (int y = 0; y < 10; ++y) p[Cell{0, y}] = 1.0;  // region runs straight through the wall
  tnav::PlannerConfig cfg;
  const auto masked = tnav::region_plan(cost, p, Cell{0, 0}, Cell{0, 9}, cfg);
  EXPECT_EQ(masked.plan.status, tnav::PlanStatus::kNoPath);
  EXPECT_FALSE(masked.full_map_fallback);
  const auto fb = tnav::region_plan(cost, p, Cell{0, 0}, Cell{0, 9}, cfg, {}, true);
  EXPECT_TRUE(fb.plan.ok());
  EXPECT_TRUE(fb.full_map_fallback);
}

}  // namespace
