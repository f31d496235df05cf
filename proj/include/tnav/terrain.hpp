// SPDX-License-Identifier: Apache-2.0
//
// Elevation rasters and the slope/roughness/step traversability model.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tnav/grid.hpp"

namespace tnav {

/// Height raster in meters with a square physical cell size.
class Dem {
 public:
  /// Throws std::invalid_argument unless width, height >= 3, cell_size > 0 and all heights are finite.
  Dem(int width, int height, double cell_size, std::vector<double> heights);

  int width() const noexcept { return heights_.width(); }
  int height() const noexcept { return heights_.height(); }
  double cell_size() const noexcept { return cell_size_; }
  const Grid<double>& heights() const noexcept { return heights_; }
  double at(Cell c) const noexcept { return heights_[c]; }

 private:
  Grid<double> heights_;
  double cell_size_;
};

struct TerrainParams {
  double max_slope_deg = 30.0;    // phi_s
  double max_step_height = 0.2;   // H_s, meters
  double max_roughness = 0.6;     // r_s
  double slope_weight = 0.6;      // k_s
  double roughness_weight = 0.2;  // k_r
  double step_weight = 0.2;       // k_f

  /// Throws std::invalid_argument if a limit is non-positive or the weights do not sum to 1.
  void validate() const;
};

/// Least-squares plane z = a*x + b*y + c over a 3x3 patch, in meters relative to the patch center.
struct PatchPlane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::array<double, 3> normal{0.0, 0.0, 1.0};  // unit length, normal[2] >= 0
  double offset = 0.0;                          // normal . p == offset on the plane
  std::array<double, 9> residuals{};            // z - plane(x, y), row-major over the patch
};

struct CellFeatures {
  double slope_deg = 0.0;
  double roughness = 0.0;
  double elev_diff = 0.0;
};

/// Heights of the 3x3 patch around `cell`, row-major. Off-map neighbors replicate the nearest edge cell.
std::array<double, 9> patch_heights(const Dem& dem, Cell cell);

PatchPlane fit_patch_plane(const Dem& dem, Cell cell);

CellFeatures compute_cell_features(const Dem& dem, Cell cell);

/// Weighted slope/roughness/step cost. Any ratio at or above its limit saturates the cell to 1.
double traversal_cost(const CellFeatures& features, const TerrainParams& params);

/// Cost map over every cell, evaluated in parallel.
CostMap compute_cost_map(const Dem& dem, const TerrainParams& params = {});

/// Diamond-square fractal terrain, 1 m cells, cropped to size x size. Same seed gives identical heights.
Dem synth_terrain(std::uint64_t seed, int size, double ruggedness);

namespace serial {
CostMap compute_cost_map(const Dem& dem, const TerrainParams& params = {});
}  // namespace serial

}  // namespace tnav
