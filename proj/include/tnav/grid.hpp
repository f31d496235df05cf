// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnav {

/// Integer grid coordinate. x is the column, y the row.
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(const Cell&, const Cell&) = default;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::string to_string(Cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

/// Dense row-major raster.
template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw std::invalid_argument("negative grid dimension");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Grid(int width, int height, std::vector<T> values) : width_(width), height_(height), data_(std::move(values)) {
    if (width < 0 || height < 0) throw std::invalid_argument("negative grid dimension");
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw std::invalid_argument("grid value count does not match dimensions");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool contains(Cell c) const noexcept { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x);
  }
  Cell cell(std::size_t index) const noexcept {
    return Cell{static_cast<int>(index % static_cast<std::size_t>(width_)),
                static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  T& operator[](Cell c) noexcept { return data_[index(c)]; }
  const T& operator[](Cell c) const noexcept { return data_[index(c)]; }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  T& at(int x, int y) { return data_.at(checked_index(x, y)); }
  const T& at(int x, int y) const { return data_.at(checked_index(x, y)); }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  bool same_shape(const Grid& other) const noexcept { return width_ == other.width_ && height_ == other.height_; }
  template <class U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t checked_index(int x, int y) const {
    if (!contains(Cell{x, y})) throw std::out_of_range("grid cell out of range");
    return index(Cell{x, y});
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Per-cell traversability cost in [0, 1]; 1 marks an untraversable cell.
class CostMap : public Grid<double> {
 public:
  using Grid::Grid;
};

/// Per-cell likelihood of lying on the optimal path, in [0, 1].
class ProbabilityMap : public Grid<double> {
 public:
  using Grid::Grid;
};

/// Binary heuristic-region mask. Nonzero means inside.
class RegionMask : public Grid<std::uint8_t> {
 public:
  using Grid::Grid;

  bool inside(Cell c) const noexcept { return (*this)[c] != 0; }
  std::size_t area() const noexcept {
    std::size_t n = 0;
    for (auto v : values()) n += v != 0;
    return n;
  }
};

/// The eight king-move offsets, cardinal directions first.
inline constexpr Cell kNeighborOffsets[8] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                             {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

inline bool is_adjacent(Cell a, Cell b) noexcept {
  const int dx = a.x - b.x;
  const int dy = a.y - b.y;
  return (dx != 0 || dy != 0) && dx >= -1 && dx <= 1 && dy >= -1 && dy <= 1;
}

}  // namespace tnav
