// SPDX-License-Identifier: Apache-2.0

#include "tnav/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <random>

#include <json.hpp>

#include "tnav/random.hpp"
#include "tnav/raster_io.hpp"
#include "tnav/terrain.hpp"

namespace tnav {

void DatasetSpec::validate() const {
  if (count < 1) throw std::invalid_argument("dataset count must be >= 1");
  if (size < 8) throw std::invalid_argument("dataset map size must be >= 8");
  if (!(omega >= 0.0)) throw std::invalid_argument("omega must be >= 0");
  if (max_retries < 1) throw std::invalid_argument("retry budget must be >= 1");
  const double sep = resolved_min_separation();
  if (!(sep >= 0.0) || sep >= size * std::sqrt(2.0)) throw std::invalid_argument("min_separation must be below size * sqrt(2)");
  encoding.resolved_sigma(size, size);
}

std::string sample_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%05d", index);
  return buf;
}

Sample generate_sample(const DatasetSpec& spec, int index) {
  spec.validate();
  if (index < 0) throw std::invalid_argument("sample index must be >= 0");
  std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(index)));

  CostMap cost = compute_cost_map(synth_terrain(rng(), spec.size, spec.ruggedness));
  for (double& v : cost.values()) v = static_cast<double>(static_cast<float>(v));

  PlannerConfig cfg;
  cfg.omega = spec.omega;
  cfg.graph_mode = GraphMode::kLazy;

  std::vector<std::uint32_t> free_cells;
  for (std::size_t i = 0; i < cost.size(); ++i)
    if (cost[i] < cfg.obstacle_threshold) free_cells.push_back(static_cast<std::uint32_t>(i));
  if (free_cells.size() < 2) throw GenerationError("terrain has fewer than two traversable cells");

  const double min_sep = spec.resolved_min_separation();
  for (int attempt = 0; attempt < spec.max_retries; ++attempt) {
    const Cell start = cost.cell(free_cells[uniform_index(rng, free_cells.size())]);
    const Cell goal = cost.cell(free_cells[uniform_index(rng, free_cells.size())]);
    if (start == goal || euclidean_distance(start, goal) < min_sep) continue;
    PlanResult plan = astar_plan(cost, start, goal, cfg);
    if (!plan.ok()) continue;

    Sample s;
    s.start_enc = gaussian_encode(spec.size, spec.size, start, spec.encoding);
    s.goal_enc = gaussian_encode(spec.size, spec.size, goal, spec.encoding);
    s.label_raster = Grid<double>(spec.size, spec.size, 0.0);
    for (Cell c : plan.path.cells) s.label_raster[c] = 1.0;
    s.label = std::move(plan.path);
    s.cost = std::move(cost);
    s.meta = SampleMeta{spec.seed, index, spec.omega, start, goal};
    return s;
  }
  throw GenerationError("no solvable start/goal pair for sample " + std::to_string(index) + " within " +
                        std::to_string(spec.max_retries) + " attempts");
}

std::vector<Sample> generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  std::vector<Sample> samples(static_cast<std::size_t>(spec.count));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < spec.count; ++i) {
    try {
      samples[i] = generate_sample(spec, i);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return samples;
}

namespace serial {

std::vector<Sample> generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) samples.push_back(generate_sample(spec, i));
  return samples;
}

}  // namespace serial

void write_dataset(const std::filesystem::path& dir, std::span<const Sample> samples) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.jsonl", std::ios::trunc);
  if (!manifest) throw std::runtime_error("cannot write manifest in " + dir.string());
  for (const Sample& s : samples) {
    const std::string stem = sample_stem(s.meta.index);
    RasterStack channels;
    channels.add(s.cost);
    channels.add(s.start_enc);
    channels.add(s.goal_enc);
    write_nnpr(dir / (stem + ".nnpr"), channels);
    RasterStack label;
    label.add(s.label_raster);
    write_nnpr(dir / (stem + ".label.nnpr"), label);
    write_path_text(dir / (stem + ".path.txt"), s.label);

    nlohmann::json j;
    j["sample_path"] = stem + ".nnpr";
    j["start"] = {s.meta.start.x, s.meta.start.y};
    j["goal"] = {s.meta.goal.x, s.meta.goal.y};
    j["omega"] = s.meta.omega;
    j["seed"] = s.meta.seed;
    j["label_path"] = stem + ".label.nnpr";
    j["index"] = s.meta.index;
    manifest << j.dump() << '\n';
  }
}

std::vector<Sample> read_dataset(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.jsonl");
  if (!manifest) throw std::runtime_error("cannot open manifest in " + dir.string());
  std::vector<Sample> samples;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad manifest line: " + std::string(e.what()));
    }
    Sample s;
    try {
      const RasterStack channels = read_nnpr(dir / j.at("sample_path").get<std::string>());
      if (channels.channels.size() != 3) throw FormatError("sample raster must have 3 channels");
      s.cost = channels.channel<CostMap>(0);
      s.start_enc = channels.channel<Grid<double>>(1);
      s.goal_enc = channels.channel<Grid<double>>(2);
      s.label_raster = read_nnpr(dir / j.at("label_path").get<std::string>()).channel<Grid<double>>(0);
      s.meta.start = Cell{j.at("start").at(0).get<int>(), j.at("start").at(1).get<int>()};
      s.meta.goal = Cell{j.at("goal").at(0).get<int>(), j.at("goal").at(1).get<int>()};
      s.meta.omega = j.at("omega").get<double>();
      s.meta.seed = j.at("seed").get<std::uint64_t>();
      s.meta.index = j.value("index", static_cast<int>(samples.size()));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad manifest entry: " + std::string(e.what()));
    }
    const std::filesystem::path path_file = dir / (sample_stem(s.meta.index) + ".path.txt");
    if (std::filesystem::exists(path_file)) {
      s.label = read_path_text(path_file);
    } else {
      // Manifests from other tools may omit the path text; the label is reproducible from the map.
      PlannerConfig cfg;
      cfg.omega = s.meta.omega;
      cfg.graph_mode = GraphMode::kLazy;
      s.label = astar_plan(s.cost, s.meta.start, s.meta.goal, cfg).path;
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace tnav
