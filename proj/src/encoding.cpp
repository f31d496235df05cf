// SPDX-License-Identifier: Apache-2.0

#include "tnav/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tnav {

namespace {

void check_center(int width, int height, Cell center) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("encoding size must be positive");
  if (center.x < 0 || center.y < 0 || center.x >= width || center.y >= height)
    throw std::invalid_argument("encoding center off the map");
}

double encode_value(int x, int y, Cell center, double sigma, double scale) {
  const double dx = x - center.x;
  const double dy = y - center.y;
  return scale * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

double peak_scale(const EncodingConfig& config, double sigma) {
  return config.normalize_peak ? 1.0 : 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
}

}  // namespace

double EncodingConfig::resolved_sigma(int width, int height) const {
  const double s = sigma.value_or(std::max(width, height) / 4.0);
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("encoding sigma must be positive");
  return s;
}

Grid<double> gaussian_encode(int width, int height, Cell center, const EncodingConfig& config) {
  check_center(width, height, center);
  const double sigma = config.resolved_sigma(width, height);
  const double scale = peak_scale(config, sigma);
  Grid<double> out(width, height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) out[Cell{x, y}] = encode_value(x, y, center, sigma, scale);
  return out;
}

namespace serial {

Grid<double> gaussian_encode(int width, int height, Cell center, const EncodingConfig& config) {
  check_center(width, height, center);
  const double sigma = config.resolved_sigma(width, height);
  const double scale = peak_scale(config, sigma);
  Grid<double> out(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) out[Cell{x, y}] = encode_value(x, y, center, sigma, scale);
  return out;
}

}  // namespace serial

}  // namespace tnav
