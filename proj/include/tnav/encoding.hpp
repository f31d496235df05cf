// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "tnav/grid.hpp"

namespace tnav {

struct EncodingConfig {
  std::optional<double> sigma;  // cells; defaults to a quarter of the larger map side
  bool normalize_peak = true;   // scale so the center value is exactly 1

  /// Throws std::invalid_argument if the resolved sigma is not positive.
  double resolved_sigma(int width, int height) const;
};

/// 2D Gaussian centered on `center`: exp(-r^2 / (2 sigma^2)) / (2 pi sigma^2), or without the
/// leading factor when normalize_peak is set.
Grid<double> gaussian_encode(int width, int height, Cell center, const EncodingConfig& config = {});

namespace serial {
Grid<double> gaussian_encode(int width, int height, Cell center, const EncodingConfig& config = {});
}

}  // namespace tnav
