// SPDX-License-Identifier: Apache-2.0
//
// NNPR v1 raster files (little-endian):
//
//   offset  size  field
//   0       4     magic "NNPR" (4E 4E 50 52)
//   4       1     version = 1
//   5       1     dtype = 0 (float32)
//   6       2     channels (u16)
//   8       4     height (u32)
//   12      4     width (u32)
//   16      ...   channels * height * width float32, channel-major, row-major within a channel
//
// Also the whitespace-separated ASCII grid used for fixtures ("width height cell_size" then
// row-major values) and the one-"x y"-per-line path text format.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "tnav/grid.hpp"
#include "tnav/search.hpp"
#include "tnav/terrain.hpp"

namespace tnav {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RasterStack {
  int width = 0;
  int height = 0;
  std::vector<std::vector<float>> channels;

  template <class T>
  void add(const Grid<T>& grid);

  /// Channel `c` widened to a grid of type G (CostMap, ProbabilityMap, ...).
  template <class G>
  G channel(std::size_t c) const;

  friend bool operator==(const RasterStack&, const RasterStack&) = default;
};

inline constexpr std::size_t kNnprHeaderSize = 16;

std::vector<std::uint8_t> encode_nnpr(const RasterStack& stack);
/// Throws FormatError on bad magic/version/dtype, truncated or oversized payloads, and dimension overflow.
RasterStack decode_nnpr(std::span<const std::uint8_t> bytes);

void write_nnpr(const std::filesystem::path& path, const RasterStack& stack);
RasterStack read_nnpr(const std::filesystem::path& path);

/// True if the file starts with the NNPR magic.
bool is_nnpr_file(const std::filesystem::path& path);

/// FNV-1a 64-bit digest, used to compare raster payloads across tools.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

struct AsciiGrid {
  int width = 0;
  int height = 0;
  double cell_size = 1.0;
  std::vector<double> values;
};

AsciiGrid read_ascii_grid(const std::filesystem::path& path);
void write_ascii_grid(const std::filesystem::path& path, const Grid<double>& grid, double cell_size = 1.0);

Dem read_dem(const std::filesystem::path& path, double nnpr_cell_size = 1.0);

/// Loads a single-channel grid from either format (detected by magic).
template <class G>
G read_grid(const std::filesystem::path& path);

GridPath read_path_text(const std::filesystem::path& path);
void write_path_text(const std::filesystem::path& path, const GridPath& grid_path);

// ---------------------------------------------------------------------------

template <class T>
void RasterStack::add(const Grid<T>& grid) {
  if (channels.empty()) {
    width = grid.width();
    height = grid.height();
  } else if (grid.width() != width || grid.height() != height) {
    throw std::invalid_argument("raster channel dimensions differ");
  }
  std::vector<float> ch(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) ch[i] = static_cast<float>(grid[i]);
  channels.push_back(std::move(ch));
}

template <class G>
G RasterStack::channel(std::size_t c) const {
  if (c >= channels.size()) throw std::out_of_range("raster channel index out of range");
  G g(width, height);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<typename G::value_type>(channels[c][i]);
  return g;
}

template <class G>
G read_grid(const std::filesystem::path& path) {
  if (is_nnpr_file(path)) {
    const RasterStack stack = read_nnpr(path);
    if (stack.channels.size() != 1) throw FormatError("expected a single-channel raster: " + path.string());
    return stack.channel<G>(0);
  }
  AsciiGrid a = read_ascii_grid(path);
  G g(a.width, a.height);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<typename G::value_type>(a.values[i]);
  return g;
}

}  // namespace tnav
