// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <iomanip>
#include <sstream>

#include "tnav/cli.hpp"
#include "tnav/dataset.hpp"
#include "tnav/raster_io.hpp"
#include "tnav/region.hpp"

namespace {

namespace fs = std::filesystem;
using tnav::Cell;

const fs::path kFixtures = TNAV_FIXTURE_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tnav");
  std::ostringstream out, err;
  const int code = tnav::cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class CliDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tnav_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

const std::string kWall = (kFixtures / "wall_cost.asc").string();

TEST_F(CliDir, PlanAroundWall) {
  const CliRun r = cli({"plan", "--map", kWall, "--start", "0,0", "--goal", "7,0", "--out", path("p.txt")});
  ASSERT_EQ(r.code, tnav::kExitOk) << r.err;
  for (const char* key : {"L=", "CC=", "weighted=", "time="}) EXPECT_NE(r.out.find(key), std::string::npos) << key;
  const tnav::GridPath p = tnav::read_path_text(path("p.txt"));
  EXPECT_EQ(p.cells.front(), Cell(0, 0));
  EXPECT_EQ(p.cells.back(), Cell(7, 0));
  bool through_gap = false;
  for (Cell c : p.cells) through_gap |= c == Cell(4, 5);
  EXPECT_TRUE(through_gap);
  EXPECT_EQ(cli({"plan", "--map", kWall, "--start", "0,0", "--goal", "7,0", "--graph", "lazy"}).code, tnav::kExitOk);
}

TEST(Cli, GoalOnObstacleExitsOne) {
  const CliRun r = cli({"plan", "--map", kWall, "--start", "0,0", "--goal", "4,2"});
  EXPECT_EQ(r.code, tnav::kExitNoPath);
  EXPECT_NE(r.err.find("no path"), std::string::npos);
}

TEST(Cli, BadInputExitsTwo) {
  CliRun r = cli({"plan", "--map", kWall, "--start", "0,0", "--goal", "7,0", "--bogus"});
  EXPECT_EQ(r.code, tnav::kExitBadInput);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_NE(r.err.find("--map"), std::string::npos);
  EXPECT_EQ(cli({"plan", "--map", kWall, "--start", "zero", "--goal", "7,0"}).code, tnav::kExitBadInput);
  EXPECT_EQ(cli({"plan", "--map", "/nonexistent.asc", "--start", "0,0", "--goal", "7,0"}).code, tnav::kExitBadInput);
  EXPECT_EQ(cli({"frobnicate"}).code, tnav::kExitBadInput);
  EXPECT_EQ(cli({"--help"}).code, tnav::kExitOk);
}

TEST_F(CliDir, CostWritesAsciiAndNnpr) {
  CliRun r = cli({"cost", "--seed", "7", "--size", "64", "--out", path("c.asc"), "--format", "ascii"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("obstacle_fraction=0.0705566"), std::string::npos) << r.out;
  const auto asc = tnav::read_grid<tnav::CostMap>(path("c.asc"));
  r = cli({"cost", "--seed", "7", "--size", "64", "--out", path("c.nnpr")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto bin = tnav::read_grid<tnav::CostMap>(path("c.nnpr"));
  ASSERT_EQ(asc.width(), 64);
  for (std::size_t i = 0; i < asc.values().size(); ++i) EXPECT_NEAR(asc.values()[i], bin.values()[i], 1e-6);

  r = cli({"cost", "--map", (kFixtures / "small_dem.asc").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("size=5x4"), std::string::npos);
}

TEST_F(CliDir, GenDatasetThenMm) {
  ASSERT_EQ(cli({"gen-dataset", "--count", "2", "--size", "32", "--seed", "5", "--out", path("ds")}).code, 0);
  const auto samples = tnav::read_dataset(dir_ / "ds");
  ASSERT_EQ(samples.size(), 2u);

  const tnav::Sample& s = samples[0];
  const auto prob = tnav::oracle_region(s.label, 32, 32, 2, 1.0);
  tnav::RasterStack stack;
  stack.add(prob);
  tnav::write_nnpr(path("prob.nnpr"), stack);
  const std::string label = (dir_ / "ds" / "sample_00000.path.txt").string();

  const CliRun r = cli({"mm", "--prob", path("prob.nnpr"), "--label", label});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto stored = tnav::read_grid<tnav::ProbabilityMap>(path("prob.nnpr"));
  const auto th = tnav::adaptive_threshold(stored, s.meta.start, s.meta.goal);
  const auto rep = tnav::region_report(s.label, th);
  std::ostringstream expect;
  expect << std::setprecision(17) << "td=" << rep.td << " area=" << rep.area << " mm=" << rep.mm << '\n';
  EXPECT_EQ(r.out, expect.str());

  const CliRun rp = cli({"region-plan", "--map", (dir_ / "ds" / "sample_00000.nnpr").string(), "--prob", path("prob.nnpr"),
                      "--start", std::to_string(s.meta.start.x) + "," + std::to_string(s.meta.start.y), "--goal",
                      std::to_string(s.meta.goal.x) + "," + std::to_string(s.meta.goal.y)});
  EXPECT_EQ(rp.code, 0) << rp.err;
  EXPECT_NE(rp.out.find("td="), std::string::npos);
  EXPECT_NE(rp.out.find("CC="), std::string::npos);
}

TEST_F(CliDir, SweepAndBench) {
  const auto cost = tnav::read_grid<tnav::CostMap>(kWall);
  CliRun r = cli({"sweep-omega", "--map", kWall, "--start", "0,0", "--goal", "7,0", "--omega-max", "0.05", "--omega-step",
               "0.01", "--out", path("s.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("omega_star="), std::string::npos);
  EXPECT_TRUE(fs::exists(path("s.csv")));

  r = cli({"bench", "--kind", "masked", "--count", "3", "--size", "32", "--trials", "1", "--out", path("b.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pairs=3"), std::string::npos) << r.out;

  r = cli({"bench", "--kind", "scaling", "--sizes", "16,32", "--trials", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, DynamicSimStatic) {
  const CliRun r = cli({"dynamic-sim", "--seed", "4", "--size", "96", "--method", "Dstar", "--static"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("reached=1"), std::string::npos) << r.out;
}

}  // namespace
