// SPDX-License-Identifier: Apache-2.0

#include "tnav/region.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "tnav/timing.hpp"

namespace tnav {

namespace {

std::vector<double> gaussian_kernel(double sigma, int& radius) {
  radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  return k;
}

void rescale_to_peak(ProbabilityMap& p) {
  double peak = 0.0;
  for (double v : p.values()) peak = std::max(peak, v);
  if (peak <= 0.0) return;
  for (double& v : p.values()) v = std::clamp(v / peak, 0.0, 1.0);
}

void check_path(const GridPath& path, int width, int height, int radius) {
  if (path.empty()) throw std::invalid_argument("oracle region needs a non-empty path");
  if (radius < 1) throw std::invalid_argument("oracle region radius must be >= 1");
  for (Cell c : path.cells)
    if (c.x < 0 || c.y < 0 || c.x >= width || c.y >= height) throw std::invalid_argument("path cell off the map");
}

// Integer factor relating the two sizes; positive for downscale, negative for upscale, 1 for identity.
int scale_factor(int from_w, int from_h, int to_w, int to_h) {
  if (from_w <= 0 || from_h <= 0 || to_w <= 0 || to_h <= 0) throw std::invalid_argument("rescale sizes must be positive");
  if (from_w >= to_w && from_w % to_w == 0 && from_h % to_h == 0 && from_w / to_w == from_h / to_h) return from_w / to_w;
  if (to_w > from_w && to_w % from_w == 0 && to_h % from_h == 0 && to_w / from_w == to_h / from_h)
    return -(to_w / from_w);
  throw std::invalid_argument("rescale requires the same integer factor on both axes");
}

double bilinear_sample(const ProbabilityMap& p, double sx, double sy) {
  sx = std::clamp(sx, 0.0, static_cast<double>(p.width() - 1));
  sy = std::clamp(sy, 0.0, static_cast<double>(p.height() - 1));
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const int x1 = std::min(x0 + 1, p.width() - 1);
  const int y1 = std::min(y0 + 1, p.height() - 1);
  const double tx = sx - x0;
  const double ty = sy - y0;
  const double top = (1.0 - tx) * p[Cell{x0, y0}] + tx * p[Cell{x1, y0}];
  const double bottom = (1.0 - tx) * p[Cell{x0, y1}] + tx * p[Cell{x1, y1}];
  return std::clamp((1.0 - ty) * top + ty * bottom, 0.0, 1.0);
}

double pooled_mean(const ProbabilityMap& p, int x, int y, int f) {
  double sum = 0.0;
  for (int dy = 0; dy < f; ++dy)
    for (int dx = 0; dx < f; ++dx) sum += p[Cell{x * f + dx, y * f + dy}];
  return std::clamp(sum / (f * f), 0.0, 1.0);
}

}  // namespace

void ThresholdPolicy::validate() const {
  if (!(td_min > 0.0 && td_min <= td_start && td_start <= 1.0)) throw std::invalid_argument("threshold policy needs 0 < td_min <= td_start <= 1");
  if (!(td_step > 0.0)) throw std::invalid_argument("threshold step must be positive");
}

std::vector<double> threshold_sweep(const ThresholdPolicy& policy) {
  policy.validate();
  std::vector<double> tds;
  for (int k = 0;; ++k) {
    // Rounded so that e.g. 0.95 - 3 * 0.05 compares equal to the literal 0.8.
    const double td = std::round((policy.td_start - k * policy.td_step) * 1e9) / 1e9;
    if (td < policy.td_min - 1e-12) break;
    tds.push_back(td);
  }
  return tds;
}

RegionMask threshold_region(const ProbabilityMap& prob, double td) {
  if (!(td >= 0.0 && td <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
  RegionMask mask(prob.width(), prob.height());
  const auto src = prob.values();
  auto dst = mask.values();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = src[i] >= td ? 1 : 0;
  return mask;
}

bool region_connected(const RegionMask& mask, Cell start, Cell goal) {
  if (!mask.contains(start) || !mask.contains(goal)) throw std::invalid_argument("endpoint off the mask");
  if (!mask.inside(start) || !mask.inside(goal)) return false;
  if (start == goal) return true;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<Cell> stack{start};
  seen[mask.index(start)] = 1;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    for (const Cell d : kNeighborOffsets) {
      const Cell nb{c.x + d.x, c.y + d.y};
      if (!mask.contains(nb)) continue;
      const std::size_t i = mask.index(nb);
      if (seen[i] || mask[i] == 0) continue;
      if (nb == goal) return true;
      seen[i] = 1;
      stack.push_back(nb);
    }
  }
  return false;
}

ThresholdResult adaptive_threshold(const ProbabilityMap& prob, Cell start, Cell goal, const ThresholdPolicy& policy) {
  if (!prob.contains(start) || !prob.contains(goal)) throw std::invalid_argument("endpoint off the probability map");
  for (double td : threshold_sweep(policy)) {
    RegionMask mask = threshold_region(prob, td);
    mask[start] = 1;
    mask[goal] = 1;
    if (region_connected(mask, start, goal)) return ThresholdResult{td, std::move(mask), false};
  }
  return ThresholdResult{0.0, RegionMask(prob.width(), prob.height(), std::uint8_t{1}), true};
}

double model_metric(const GridPath& label_path, const RegionMask& mask) {
  const std::size_t area = mask.area();
  if (area == 0) throw std::invalid_argument("model metric needs a non-empty mask");
  if (label_path.empty()) throw std::invalid_argument("model metric needs a non-empty label path");
  const std::set<Cell> cells(label_path.cells.begin(), label_path.cells.end());
  return static_cast<double>(cells.size()) / static_cast<double>(area);
}

RegionReport region_report(const GridPath& label_path, const ThresholdResult& threshold) {
  return RegionReport{threshold.td, threshold.mask.area(), model_metric(label_path, threshold.mask)};
}

ProbabilityMap oracle_region(const GridPath& label_path, int width, int height, int radius, double blur_sigma) {
  check_path(label_path, width, height, radius);
  ProbabilityMap p(width, height, 0.0);
  for (Cell c : label_path.cells) p[c] = 1.0;

  // Chebyshev dilation is a square window, so it separates into a row pass and a column pass.
  ProbabilityMap tmp(width, height, 0.0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double v = 0.0;
      for (int k = std::max(0, x - radius); k <= std::min(width - 1, x + radius) && v == 0.0; ++k) v = p[Cell{k, y}];
      tmp[Cell{x, y}] = v;
    }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double v = 0.0;
      for (int k = std::max(0, y - radius); k <= std::min(height - 1, y + radius) && v == 0.0; ++k) v = tmp[Cell{x, k}];
      p[Cell{x, y}] = v;
    }
  if (blur_sigma <= 0.0) return p;

  // Edge-normalized separable blur: weights outside the map are dropped and the rest renormalized.
  int kr = 0;
  const std::vector<double> kernel = gaussian_kernel(blur_sigma, kr);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      double wsum = 0.0;
      for (int k = -kr; k <= kr; ++k) {
        const int xx = x + k;
        if (xx < 0 || xx >= width) continue;
        sum += kernel[k + kr] * p[Cell{xx, y}];
        wsum += kernel[k + kr];
      }
      tmp[Cell{x, y}] = sum / wsum;
    }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      double wsum = 0.0;
      for (int k = -kr; k <= kr; ++k) {
        const int yy = y + k;
        if (yy < 0 || yy >= height) continue;
        sum += kernel[k + kr] * tmp[Cell{x, yy}];
        wsum += kernel[k + kr];
      }
      p[Cell{x, y}] = sum / wsum;
    }
  rescale_to_peak(p);
  return p;
}

ProbabilityMap rescale_region(const ProbabilityMap& prob, int target_width, int target_height) {
  const int f = scale_factor(prob.width(), prob.height(), target_width, target_height);
  ProbabilityMap out(target_width, target_height, 0.0);
  if (f == 1) return prob;
  if (f > 1) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < target_height; ++y)
      for (int x = 0; x < target_width; ++x) out[Cell{x, y}] = pooled_mean(prob, x, y, f);
    return out;
  }
  const double up = -f;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < target_height; ++y)
    for (int x = 0; x < target_width; ++x)
      out[Cell{x, y}] = bilinear_sample(prob, (x + 0.5) / up - 0.5, (y + 0.5) / up - 0.5);
  return out;
}

RegionMask dilate_mask(const RegionMask& mask, int radius) {
  if (radius < 0) throw std::invalid_argument("dilation radius must be >= 0");
  if (radius == 0) return mask;
  const int w = mask.width();
  const int h = mask.height();
  RegionMask rows(w, h);
  RegionMask out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = 0;
      for (int k = std::max(0, x - radius); k <= std::min(w - 1, x + radius) && !v; ++k) v = mask[Cell{k, y}] != 0;
      rows[Cell{x, y}] = v;
    }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = 0;
      for (int k = std::max(0, y - radius); k <= std::min(h - 1, y + radius) && !v; ++k) v = rows[Cell{x, k}];
      out[Cell{x, y}] = v;
    }
  return out;
}

ThresholdResult multiscale_region(const ProbabilityMap& coarse_prob, int full_width, int full_height, Cell start,
                                  Cell goal, const ThresholdPolicy& policy) {
  const int f = scale_factor(full_width, full_height, coarse_prob.width(), coarse_prob.height());
  if (start.x < 0 || start.y < 0 || start.x >= full_width || start.y >= full_height || goal.x < 0 || goal.y < 0 ||
      goal.x >= full_width || goal.y >= full_height)
    throw std::invalid_argument("endpoint off the full-resolution map");

  const ThresholdResult coarse =
      adaptive_threshold(coarse_prob, Cell{start.x / f, start.y / f}, Cell{goal.x / f, goal.y / f}, policy);
  ProbabilityMap coarse_mask(coarse_prob.width(), coarse_prob.height());
  for (std::size_t i = 0; i < coarse_mask.size(); ++i) coarse_mask[i] = coarse.mask[i] ? 1.0 : 0.0;

  RegionMask mask = dilate_mask(threshold_region(rescale_region(coarse_mask, full_width, full_height), 0.5), 1);
  mask[start] = 1;
  mask[goal] = 1;
  if (coarse.fallback || !region_connected(mask, start, goal))
    return ThresholdResult{0.0, RegionMask(full_width, full_height, std::uint8_t{1}), true};
  return ThresholdResult{coarse.td, std::move(mask), false};
}

RegionPlanResult region_plan(const CostMap& costmap, const ProbabilityMap& prob, Cell start, Cell goal,
                             const PlannerConfig& cfg, const ThresholdPolicy& policy, bool fallback_to_full) {
  if (!prob.same_shape(costmap)) throw std::invalid_argument("probability map shape differs from cost map");
  RegionPlanResult out;
  Stopwatch clock;
  out.threshold = adaptive_threshold(prob, start, goal, policy);
  out.threshold_time = clock.seconds();
  out.plan = astar_plan(costmap, start, goal, cfg, &out.threshold.mask);
  if (!out.plan.ok() && fallback_to_full && !out.threshold.fallback) {
    out.plan = astar_plan(costmap, start, goal, cfg);
    out.full_map_fallback = true;
  }
  return out;
}

namespace serial {

ProbabilityMap oracle_region(const GridPath& label_path, int width, int height, int radius, double blur_sigma) {
  check_path(label_path, width, height, radius);
  ProbabilityMap dilated(width, height, 0.0);
  for (Cell c : label_path.cells)
    for (int y = std::max(0, c.y - radius); y <= std::min(height - 1, c.y + radius); ++y)
      for (int x = std::max(0, c.x - radius); x <= std::min(width - 1, c.x + radius); ++x) dilated[Cell{x, y}] = 1.0;
  if (blur_sigma <= 0.0) return dilated;

  // Direct 2D convolution over the in-bounds window.
  int kr = 0;
  const std::vector<double> kernel = gaussian_kernel(blur_sigma, kr);
  ProbabilityMap out(width, height, 0.0);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sum = 0.0;
      double wsum = 0.0;
      for (int dy = -kr; dy <= kr; ++dy)
        for (int dx = -kr; dx <= kr; ++dx) {
          const Cell c{x + dx, y + dy};
          if (!dilated.contains(c)) continue;
          const double w = kernel[dx + kr] * kernel[dy + kr];
          sum += w * dilated[c];
          wsum += w;
        }
      out[Cell{x, y}] = sum / wsum;
    }
  rescale_to_peak(out);
  return out;
}

ProbabilityMap rescale_region(const ProbabilityMap& prob, int target_width, int target_height) {
  const int f = scale_factor(prob.width(), prob.height(), target_width, target_height);
  if (f == 1) return prob;
  ProbabilityMap out(target_width, target_height, 0.0);
  for (int y = 0; y < target_height; ++y)
    for (int x = 0; x < target_width; ++x)
      out[Cell{x, y}] = f > 1 ? pooled_mean(prob, x, y, f)
                              : bilinear_sample(prob, (x + 0.5) / -f - 0.5, (y + 0.5) / -f - 0.5);
  return out;
}

}  // namespace serial

}  // namespace tnav
