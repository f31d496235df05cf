// SPDX-License-Identifier: Apache-2.0

#include "tnav/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tnav/random.hpp"

namespace tnav {

namespace {

// Diamond-square displacement amplitude is kAmplitude * step^kHurst meters at ruggedness 1.
constexpr double kAmplitude = 0.07;
constexpr double kHurst = 1.0;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

int clamp_coord(int v, int n) { return std::clamp(v, 0, n - 1); }

}  // namespace

Dem::Dem(int width, int height, double cell_size, std::vector<double> heights)
    : heights_(width, height, std::move(heights)), cell_size_(cell_size) {
  if (width < 3 || height < 3) throw std::invalid_argument("DEM must be at least 3x3");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw std::invalid_argument("DEM cell size must be positive");
  for (double h : heights_.values())
    if (!std::isfinite(h)) throw std::invalid_argument("DEM heights must be finite");
}

void TerrainParams::validate() const {
  if (!(max_slope_deg > 0.0) || !(max_step_height > 0.0) || !(max_roughness > 0.0))
    throw std::invalid_argument("terrain limits must be positive");
  if (slope_weight < 0.0 || roughness_weight < 0.0 || step_weight < 0.0)
    throw std::invalid_argument("terrain weights must be non-negative");
  if (std::abs(slope_weight + roughness_weight + step_weight - 1.0) > 1e-9)
    throw std::invalid_argument("terrain weights must sum to 1");
}

std::array<double, 9> patch_heights(const Dem& dem, Cell cell) {
  std::array<double, 9> z{};
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      z[(dy + 1) * 3 + (dx + 1)] =
          dem.at(Cell{clamp_coord(cell.x + dx, dem.width()), clamp_coord(cell.y + dy, dem.height())});
  return z;
}

PatchPlane fit_patch_plane(const Dem& dem, Cell cell) {
  const auto z = patch_heights(dem, cell);
  const double h = dem.cell_size();

  // Patch offsets are symmetric about the center, so the normal equations are diagonal:
  // sum(x) = sum(y) = sum(xy) = 0 and sum(x^2) = sum(y^2) = 6h^2.
  double sxz = 0.0;
  double syz = 0.0;
  double sz = 0.0;
  for (int j = 0; j < 9; ++j) {
    const double x = (j % 3 - 1) * h;
    const double y = (j / 3 - 1) * h;
    sxz += x * z[j];
    syz += y * z[j];
    sz += z[j];
  }

  PatchPlane plane;
  plane.a = sxz / (6.0 * h * h);
  plane.b = syz / (6.0 * h * h);
  plane.c = sz / 9.0;

  const double norm = std::sqrt(plane.a * plane.a + plane.b * plane.b + 1.0);
  plane.normal = {-plane.a / norm, -plane.b / norm, 1.0 / norm};
  plane.offset = plane.c / norm;

  for (int j = 0; j < 9; ++j) {
    const double x = (j % 3 - 1) * h;
    const double y = (j / 3 - 1) * h;
    plane.residuals[j] = z[j] - (plane.a * x + plane.b * y + plane.c);
  }
  return plane;
}

CellFeatures compute_cell_features(const Dem& dem, Cell cell) {
  const PatchPlane plane = fit_patch_plane(dem, cell);
  CellFeatures f;
  f.slope_deg = std::atan2(std::hypot(plane.normal[0], plane.normal[1]), plane.normal[2]) * kRadToDeg;
  double ss = 0.0;
  for (double r : plane.residuals) {
    ss += r * r;
    f.elev_diff = std::max(f.elev_diff, std::abs(r));
  }
  f.roughness = std::sqrt(ss / 9.0);
  return f;
}

double traversal_cost(const CellFeatures& features, const TerrainParams& params) {
  const double slope_ratio = features.slope_deg / params.max_slope_deg;
  const double rough_ratio = features.roughness / params.max_roughness;
  const double step_ratio = features.elev_diff / params.max_step_height;
  if (slope_ratio >= 1.0 || rough_ratio >= 1.0 || step_ratio >= 1.0) return 1.0;
  const double cost = params.slope_weight * std::clamp(slope_ratio, 0.0, 1.0) +
                      params.roughness_weight * std::clamp(rough_ratio, 0.0, 1.0) +
                      params.step_weight * std::clamp(step_ratio, 0.0, 1.0);
  return std::clamp(cost, 0.0, 1.0);
}

CostMap compute_cost_map(const Dem& dem, const TerrainParams& params) {
  params.validate();
  CostMap out(dem.width(), dem.height());
  const int w = dem.width();
  const int h = dem.height();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out[Cell{x, y}] = traversal_cost(compute_cell_features(dem, Cell{x, y}), params);
  return out;
}

namespace serial {

CostMap compute_cost_map(const Dem& dem, const TerrainParams& params) {
  params.validate();
  CostMap out(dem.width(), dem.height());
  for (int y = 0; y < dem.height(); ++y)
    for (int x = 0; x < dem.width(); ++x) out[Cell{x, y}] = traversal_cost(compute_cell_features(dem, Cell{x, y}), params);
  return out;
}

}  // namespace serial

Dem synth_terrain(std::uint64_t seed, int size, double ruggedness) {
  if (size < 8) throw std::invalid_argument("synthetic terrain size must be at least 8");
  if (!(ruggedness >= 0.0) || !std::isfinite(ruggedness)) throw std::invalid_argument("ruggedness must be >= 0");

  int n = 2;
  while (n + 1 < size) n *= 2;
  n += 1;

  std::mt19937_64 rng(seed);
  auto amp = [&](int step) { return ruggedness * kAmplitude * std::pow(static_cast<double>(step), kHurst); };

  std::vector<double> h(static_cast<std::size_t>(n) * n, 0.0);
  auto at = [&](int x, int y) -> double& { return h[static_cast<std::size_t>(y) * n + x]; };

  const int last = n - 1;
  for (auto [x, y] : {std::pair{0, 0}, {last, 0}, {0, last}, {last, last}}) at(x, y) = uniform_signed(rng) * amp(last);

  for (int step = last; step > 1; step /= 2) {
    const int half = step / 2;
    const double a = amp(step);
    for (int y = half; y < n; y += step)
      for (int x = half; x < n; x += step)
        at(x, y) = 0.25 * (at(x - half, y - half) + at(x + half, y - half) + at(x - half, y + half) +
                           at(x + half, y + half)) +
                   uniform_signed(rng) * a;
    for (int y = 0; y < n; y += half) {
      for (int x = (y / half) % 2 == 0 ? half : 0; x < n; x += step) {
        double sum = 0.0;
        int count = 0;
        if (x >= half) sum += at(x - half, y), ++count;
        if (x + half < n) sum += at(x + half, y), ++count;
        if (y >= half) sum += at(x, y - half), ++count;
        if (y + half < n) sum += at(x, y + half), ++count;
        at(x, y) = sum / count + uniform_signed(rng) * a;
      }
    }
  }

  std::vector<double> cropped(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) cropped[static_cast<std::size_t>(y) * size + x] = at(x, y) + 0.0;
  return Dem(size, size, 1.0, std::move(cropped));
}

}  // namespace tnav
