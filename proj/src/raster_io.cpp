// SPDX-License-Identifier: Apache-2.0

#include "tnav/raster_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tnav {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{0x4E, 0x4E, 0x50, 0x52};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kDtypeFloat32 = 0;
// Guards against allocating absurd buffers from a corrupt header.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 31;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

std::vector<std::uint8_t> encode_nnpr(const RasterStack& stack) {
  if (stack.channels.empty()) throw std::invalid_argument("raster stack has no channels");
  if (stack.channels.size() > std::numeric_limits<std::uint16_t>::max())
    throw std::invalid_argument("too many raster channels");
  if (stack.width <= 0 || stack.height <= 0) throw std::invalid_argument("raster dimensions must be positive");
  const std::size_t plane = static_cast<std::size_t>(stack.width) * static_cast<std::size_t>(stack.height);
  for (const auto& ch : stack.channels)
    if (ch.size() != plane) throw std::invalid_argument("raster channel size does not match dimensions");

  std::vector<std::uint8_t> out;
  out.reserve(kNnprHeaderSize + 4 * plane * stack.channels.size());
  for (std::uint8_t b : kMagic) out.push_back(b);
  out.push_back(kVersion);
  out.push_back(kDtypeFloat32);
  put_u16(out, static_cast<std::uint16_t>(stack.channels.size()));
  put_u32(out, static_cast<std::uint32_t>(stack.height));
  put_u32(out, static_cast<std::uint32_t>(stack.width));
  for (const auto& ch : stack.channels)
    for (float v : ch) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

RasterStack decode_nnpr(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kNnprHeaderSize) throw FormatError("NNPR header truncated");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw FormatError("bad NNPR magic");
  if (bytes[4] != kVersion) throw FormatError("unsupported NNPR version " + std::to_string(bytes[4]));
  if (bytes[5] != kDtypeFloat32) throw FormatError("unsupported NNPR dtype " + std::to_string(bytes[5]));
  const std::uint64_t channels = static_cast<std::uint64_t>(bytes[6]) | static_cast<std::uint64_t>(bytes[7]) << 8;
  const std::uint64_t height = get_u32(bytes, 8);
  const std::uint64_t width = get_u32(bytes, 12);
  if (channels == 0 || height == 0 || width == 0) throw FormatError("NNPR dimensions must be positive");
  if (height > static_cast<std::uint64_t>(std::numeric_limits<int>::max()) ||
      width > static_cast<std::uint64_t>(std::numeric_limits<int>::max()) || width * height > kMaxElements ||
      channels * width * height > kMaxElements)
    throw FormatError("NNPR dimensions overflow");
  const std::uint64_t plane = width * height;
  const std::uint64_t expected = kNnprHeaderSize + 4 * channels * plane;
  if (bytes.size() < expected) throw FormatError("NNPR payload truncated");
  if (bytes.size() > expected) throw FormatError("NNPR payload has trailing bytes");

  RasterStack stack;
  stack.width = static_cast<int>(width);
  stack.height = static_cast<int>(height);
  stack.channels.assign(channels, std::vector<float>(plane));
  std::size_t at = kNnprHeaderSize;
  for (auto& ch : stack.channels)
    for (float& v : ch) {
      v = std::bit_cast<float>(get_u32(bytes, at));
      at += 4;
    }
  return stack;
}

void write_nnpr(const std::filesystem::path& path, const RasterStack& stack) {
  const auto bytes = encode_nnpr(stack);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

RasterStack read_nnpr(const std::filesystem::path& path) { return decode_nnpr(read_bytes(path)); }

bool is_nnpr_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  return in.gcount() == 4 && std::equal(kMagic.begin(), kMagic.end(), head.begin(),
                                        [](std::uint8_t m, char c) { return m == static_cast<std::uint8_t>(c); });
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

AsciiGrid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  AsciiGrid g;
  if (!(in >> g.width >> g.height >> g.cell_size)) throw FormatError("ASCII grid header must be 'width height cell_size'");
  if (g.width <= 0 || g.height <= 0 || !(g.cell_size > 0.0))
    throw FormatError("ASCII grid dimensions and cell size must be positive");
  const std::size_t n = static_cast<std::size_t>(g.width) * static_cast<std::size_t>(g.height);
  g.values.reserve(n);
  double v = 0.0;
  while (g.values.size() < n && in >> v) {
    if (!std::isfinite(v)) throw FormatError("ASCII grid contains a non-finite value");
    g.values.push_back(v);
  }
  if (g.values.size() != n) throw FormatError("ASCII grid has fewer values than width * height");
  std::string rest;
  if (in >> rest) throw FormatError("ASCII grid has trailing content");
  return g;
}

void write_ascii_grid(const std::filesystem::path& path, const Grid<double>& grid, double cell_size) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << grid.width() << ' ' << grid.height() << ' ' << cell_size << '\n';
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) out << (x ? " " : "") << grid[Cell{x, y}];
    out << '\n';
  }
}

Dem read_dem(const std::filesystem::path& path, double nnpr_cell_size) {
  if (is_nnpr_file(path)) {
    const RasterStack stack = read_nnpr(path);
    if (stack.channels.size() != 1) throw FormatError("DEM raster must have one channel");
    std::vector<double> h(stack.channels[0].begin(), stack.channels[0].end());
    return Dem(stack.width, stack.height, nnpr_cell_size, std::move(h));
  }
  AsciiGrid a = read_ascii_grid(path);
  return Dem(a.width, a.height, a.cell_size, std::move(a.values));
}

GridPath read_path_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  GridPath p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Cell c;
    std::string extra;
    if (!(ls >> c.x >> c.y) || (ls >> extra))
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected 'x y'");
    p.cells.push_back(c);
  }
  return p;
}

void write_path_text(const std::filesystem::path& path, const GridPath& grid_path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Cell c : grid_path.cells) out << c.x << ' ' << c.y << '\n';
}

}  // namespace tnav
