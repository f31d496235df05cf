// SPDX-License-Identifier: Apache-2.0
//
// Heuristic regions: thresholded, connectivity-checked masks derived from probability maps.

#pragma once

#include <cstddef>

#include "tnav/grid.hpp"
#include "tnav/search.hpp"

namespace tnav {

struct ThresholdPolicy {
  double td_start = 0.95;
  double td_step = 0.05;
  double td_min = 0.05;

  void validate() const;
};

struct ThresholdResult {
  double td = 0.0;
  RegionMask mask;
  bool fallback = false;  // no threshold connected start and goal; mask is the whole map
};

struct RegionReport {
  double td = 0.0;
  std::size_t area = 0;  // Z_model
  double mm = 0.0;
};

/// Mask of cells with p >= td. Throws std::invalid_argument unless td is in [0, 1].
RegionMask threshold_region(const ProbabilityMap& prob, double td);

/// True iff an 8-connected chain of mask cells joins start and goal.
bool region_connected(const RegionMask& mask, Cell start, Cell goal);

/// Largest td on the sweep grid whose mask (start and goal forced in) connects the endpoints.
ThresholdResult adaptive_threshold(const ProbabilityMap& prob, Cell start, Cell goal,
                                   const ThresholdPolicy& policy = {});

/// The thresholds adaptive_threshold tries, highest first.
std::vector<double> threshold_sweep(const ThresholdPolicy& policy);

/// Distinct label-path cells over mask area. Throws std::invalid_argument for an empty mask or path.
double model_metric(const GridPath& label_path, const RegionMask& mask);

RegionReport region_report(const GridPath& label_path, const ThresholdResult& threshold);

/// Model-free probability map: 1 within Chebyshev distance `radius` of the path, optionally
/// Gaussian-blurred and rescaled to a peak of 1. Throws std::invalid_argument for an empty path
/// or radius < 1.
ProbabilityMap oracle_region(const GridPath& label_path, int width, int height, int radius, double blur_sigma);

/// Average-pools (downscale) or bilinearly interpolates (upscale) by an integer factor.
/// Throws std::invalid_argument when the sizes are not related by the same integer factor on both axes.
ProbabilityMap rescale_region(const ProbabilityMap& prob, int target_width, int target_height);

/// Grows the mask by `radius` cells in Chebyshev distance.
RegionMask dilate_mask(const RegionMask& mask, int radius);

/// Coarse-to-fine workflow: threshold a low-resolution probability map adaptively, bring the mask
/// back to full resolution, and dilate it by one cell. Endpoints are full-resolution cells.
ThresholdResult multiscale_region(const ProbabilityMap& coarse_prob, int full_width, int full_height, Cell start,
                                  Cell goal, const ThresholdPolicy& policy = {});

struct RegionPlanResult {
  ThresholdResult threshold;
  PlanResult plan;
  bool full_map_fallback = false;  // masked search failed and the full map was searched instead
  double threshold_time = 0.0;     // seconds spent in adaptive_threshold
};

/// Adaptive threshold followed by masked A*. With `fallback_to_full`, a failed masked search is
/// retried on the whole map.
RegionPlanResult region_plan(const CostMap& costmap, const ProbabilityMap& prob, Cell start, Cell goal,
                             const PlannerConfig& cfg, const ThresholdPolicy& policy = {}, bool fallback_to_full = false);

namespace serial {
ProbabilityMap oracle_region(const GridPath& label_path, int width, int height, int radius, double blur_sigma);
ProbabilityMap rescale_region(const ProbabilityMap& prob, int target_width, int target_height);
}  // namespace serial

}  // namespace tnav
