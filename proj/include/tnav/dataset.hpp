// SPDX-License-Identifier: Apache-2.0
//
// Synthetic training samples: terrain cost map, start/goal Gaussian encodings, and the A* label.
//
// On disk a dataset directory holds, per sample, `sample_NNNNN.nnpr` (cost, start, goal
// channels), `sample_NNNNN.label.nnpr` (label raster), `sample_NNNNN.path.txt` (label cells),
// and a `manifest.jsonl` with one object per sample:
//   {"sample_path", "start": [x, y], "goal": [x, y], "omega", "seed", "label_path", "index"}

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tnav/encoding.hpp"
#include "tnav/grid.hpp"
#include "tnav/search.hpp"

namespace tnav {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  int count = 1;
  int size = 64;
  double omega = 0.011;
  std::uint64_t seed = 0;
  std::optional<double> min_separation;  // cells; defaults to size / 4
  double ruggedness = 1.0;
  EncodingConfig encoding;
  int max_retries = 64;

  double resolved_min_separation() const { return min_separation.value_or(size / 4.0); }
  void validate() const;
};

struct SampleMeta {
  std::uint64_t seed = 0;
  int index = 0;
  double omega = 0.0;
  Cell start;
  Cell goal;
};

struct Sample {
  CostMap cost;
  Grid<double> start_enc;
  Grid<double> goal_enc;
  GridPath label;
  Grid<double> label_raster;
  SampleMeta meta;
};

/// Deterministic in (spec.seed, index). Costs are rounded to float32 before labeling so that a
/// sample read back from disk reproduces its own label. Throws GenerationError when the
/// endpoint retry budget runs out.
Sample generate_sample(const DatasetSpec& spec, int index);

/// All spec.count samples, generated in parallel across indices.
std::vector<Sample> generate_dataset(const DatasetSpec& spec);

std::string sample_stem(int index);

void write_dataset(const std::filesystem::path& dir, std::span<const Sample> samples);
std::vector<Sample> read_dataset(const std::filesystem::path& dir);

namespace serial {
std::vector<Sample> generate_dataset(const DatasetSpec& spec);
}

}  // namespace tnav
