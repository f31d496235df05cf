// SPDX-License-Identifier: Apache-2.0
//
// Omega calibration and the planning benchmarks: full-map scaling (graph construction vs.
// search split) and paired full vs. heuristic-region planning.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnav/dataset.hpp"
#include "tnav/grid.hpp"
#include "tnav/region.hpp"
#include "tnav/search.hpp"

namespace tnav {

enum class Method { kAstar, kAstarNN, kDstar, kDstarNN };

std::string_view to_string(Method m);
/// Accepts "Astar", "AstarNN", "Dstar", "DstarNN" (case-insensitive). Throws std::invalid_argument otherwise.
Method parse_method(std::string_view s);
inline bool uses_region(Method m) { return m == Method::kAstarNN || m == Method::kDstarNN; }

// ---- omega sweep ----------------------------------------------------------

struct OmegaSweep {
  std::vector<double> omegas;
  std::vector<double> lengths;    // L per omega
  std::vector<double> ccs;        // CC per omega
  std::vector<double> edge_sums;  // T_sn per omega
  std::vector<double> len_norm;   // min-max normalized over the sweep
  std::vector<double> cc_norm;
  std::vector<double> times;  // planning seconds
  std::size_t star_index = 0;
  double omega_star = 0.0;

  /// True when the minimum of len_norm + cc_norm is at neither end of the grid.
  bool interior_optimum() const { return star_index > 0 && star_index + 1 < omegas.size(); }
};

/// Evenly spaced grid lo, lo + step, ..., hi (inclusive, rounded to 1e-9).
std::vector<double> omega_grid(double lo, double hi, double step);

/// One A* plan per omega. Throws std::invalid_argument for fewer than 3 omegas or a grid without
/// 0, and std::runtime_error if any omega leaves the instance unsolvable.
OmegaSweep sweep_omega(const CostMap& costmap, Cell start, Cell goal, std::span<const double> omegas,
                       GraphMode mode = GraphMode::kLazy);

void write_sweep_csv(std::ostream& out, const OmegaSweep& sweep);

// ---- scaling benchmark ----------------------------------------------------

struct ScalingRow {
  int size = 0;
  double graphing_time = 0.0;  // median seconds
  double search_time = 0.0;    // median seconds
  double graphing_ratio = 0.0;
  std::size_t path_cells = 0;
  double length = 0.0;
  std::size_t graph_nodes = 0;
  std::size_t expansions = 0;
  Cell start;
  Cell goal;
};

struct ScalingOptions {
  std::uint64_t seed = 1;
  int trials = 3;
  double omega = 0.011;
  // Endpoints as fractions of the map side, snapped to the nearest traversable cell.
  double start_fx = 0.1, start_fy = 0.15;
  double goal_fx = 0.9, goal_fy = 0.85;
};

/// Terrain generated at the largest size; smaller sizes are average-pooled, uniformly shrunk copies
/// (heights divided by the pooling factor) of the same landscape. Sizes must divide the largest size.
std::vector<ScalingRow> bench_scaling(std::span<const int> sizes, const ScalingOptions& options = {});

void write_scaling_csv(std::ostream& out, std::span<const ScalingRow> rows);

// ---- paired full vs. masked benchmark -------------------------------------

/// Probability map for a sample (oracle region or a model output on disk).
using SampleRegionSource = std::function<ProbabilityMap(const Sample&)>;

SampleRegionSource oracle_sample_region(int radius = 3, double blur_sigma = 1.0);
/// Reads `<dir>/<sample stem>.prob.nnpr`; throws std::runtime_error if the file is missing.
SampleRegionSource model_file_region(std::filesystem::path dir);

struct BenchRow {
  int sample = 0;
  int map_size = 0;
  Method method = Method::kAstar;
  double at = 0.0;  // seconds; median over trials
  bool success = false;
  std::optional<double> cc;
  std::optional<double> weighted_cost;
  std::optional<double> mm;
  std::optional<std::size_t> mask_area;
  double graphing_time = 0.0;
  double search_time = 0.0;
  std::size_t expansions = 0;
  std::size_t graph_nodes = 0;
  GridPath path;
  std::string note;
};

struct MaskedSummary {
  std::size_t pairs = 0;
  double mean_full_at = 0.0;
  double mean_masked_at = 0.0;
  double speedup = 0.0;             // mean full AT / mean masked AT
  double mean_cc_excess_pct = 0.0;  // over successful pairs
  double success_rate = 0.0;
  double consistent_rate = 0.0;  // masked weighted cost equals full within 1e-9
  double mean_mm = 0.0;
  double mean_mask_fraction = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  MaskedSummary summary;
};

struct MaskedBenchOptions {
  int trials = 3;
  PlannerConfig cfg;  // prebuilt graph by default
  ThresholdPolicy policy;
};

/// For each sample: full-map A* and adaptive-threshold + masked A* on the same map and endpoints.
/// The masked timing covers thresholding and search; producing the probability map is not timed.
BenchReport bench_masked_vs_full(std::span<const Sample> samples, const SampleRegionSource& region_source,
                                 const MaskedBenchOptions& options = {});

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace tnav
