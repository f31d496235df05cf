// SPDX-License-Identifier: Apache-2.0

#include "tnav/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "tnav/raster_io.hpp"
#include "tnav/terrain.hpp"
#include "tnav/timing.hpp"

namespace tnav {

namespace {

std::vector<double> min_max_normalize(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double span = *hi - *lo;
  std::vector<double> out(v.size(), 0.0);
  if (span <= 1e-12 * std::max(1.0, std::abs(*hi))) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / span;
  return out;
}

Dem pool_dem(const Dem& dem, int factor) {
  if (factor == 1) return dem;
  const int w = dem.width() / factor;
  const int h = dem.height() / factor;
  std::vector<double> heights(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = 0; dy < factor; ++dy)
        for (int dx = 0; dx < factor; ++dx) sum += dem.at(Cell{x * factor + dx, y * factor + dy});
      heights[static_cast<std::size_t>(y) * w + x] = sum / (factor * factor) / factor;
    }
  // Uniformly shrunk copy of the landscape: slopes are kept, the cell size stays the same.
  return Dem(w, h, dem.cell_size(), std::move(heights));
}

Cell nearest_free(const CostMap& cost, double fx, double fy, double threshold) {
  const double tx = fx * (cost.width() - 1);
  const double ty = fy * (cost.height() - 1);
  Cell best{-1, -1};
  double best_d = std::numeric_limits<double>::infinity();
  for (int y = 0; y < cost.height(); ++y)
    for (int x = 0; x < cost.width(); ++x) {
      if (cost[Cell{x, y}] >= threshold) continue;
      const double d = (x - tx) * (x - tx) + (y - ty) * (y - ty);
      if (d < best_d) best_d = d, best = Cell{x, y};
    }
  if (best.x < 0) throw std::runtime_error("map has no traversable cell");
  return best;
}

template <class F>
double timed(F&& f) {
  Stopwatch clock;
  f();
  return clock.seconds();
}

std::size_t label_area(const Sample& s) {
  if (!s.label.empty()) return s.label.size();
  std::size_t n = 0;
  for (double v : s.label_raster.values()) n += v > 0.5;
  return n;
}

template <class T>
void put_optional(std::ostream& out, const std::optional<T>& v) {
  if (v) out << *v;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kAstar: return "Astar";
    case Method::kAstarNN: return "AstarNN";
    case Method::kDstar: return "Dstar";
    case Method::kDstarNN: return "DstarNN";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "astar") return Method::kAstar;
  if (lower == "astarnn") return Method::kAstarNN;
  if (lower == "dstar") return Method::kDstar;
  if (lower == "dstarnn") return Method::kDstarNN;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

std::vector<double> omega_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("omega grid needs step > 0 and hi >= lo");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double w = std::round((lo + k * step) * 1e9) / 1e9;
    if (w > hi + 1e-12) break;
    grid.push_back(w);
  }
  return grid;
}

OmegaSweep sweep_omega(const CostMap& costmap, Cell start, Cell goal, std::span<const double> omegas, GraphMode mode) {
  if (omegas.size() < 3) throw std::invalid_argument("omega sweep needs at least 3 values");
  if (std::find(omegas.begin(), omegas.end(), 0.0) == omegas.end())
    throw std::invalid_argument("omega sweep must include 0");
  if (!std::is_sorted(omegas.begin(), omegas.end())) throw std::invalid_argument("omega sweep must be ascending");

  OmegaSweep sweep;
  sweep.omegas.assign(omegas.begin(), omegas.end());
  for (double w : omegas) {
    PlannerConfig cfg;
    cfg.omega = w;
    cfg.graph_mode = mode;
    PlanResult plan;
    const double t = timed([&] { plan = astar_plan(costmap, start, goal, cfg); });
    if (!plan.ok())
      throw std::runtime_error("omega sweep instance unsolvable at omega " + std::to_string(w) + ": " +
                               std::string(to_string(plan.status)));
    sweep.lengths.push_back(plan.stats.length);
    sweep.ccs.push_back(plan.stats.cc);
    sweep.edge_sums.push_back(plan.stats.edge_cost_sum);
    sweep.times.push_back(t);
  }
  sweep.len_norm = min_max_normalize(sweep.lengths);
  sweep.cc_norm = min_max_normalize(sweep.ccs);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const double v = sweep.len_norm[i] + sweep.cc_norm[i];
    if (v < best - 1e-12) {
      best = v;
      sweep.star_index = i;
    }
  }
  sweep.omega_star = sweep.omegas[sweep.star_index];
  return sweep;
}

void write_sweep_csv(std::ostream& out, const OmegaSweep& sweep) {
  out << "omega,length,cc,tsn,len_norm,cc_norm,sum_norm,time_s,is_star\n";
  out << std::setprecision(12);
  for (std::size_t i = 0; i < sweep.omegas.size(); ++i)
    out << sweep.omegas[i] << ',' << sweep.lengths[i] << ',' << sweep.ccs[i] << ',' << sweep.edge_sums[i] << ','
        << sweep.len_norm[i] << ',' << sweep.cc_norm[i] << ',' << sweep.len_norm[i] + sweep.cc_norm[i] << ','
        << sweep.times[i] << ',' << (i == sweep.star_index ? 1 : 0) << '\n';
}

std::vector<ScalingRow> bench_scaling(std::span<const int> sizes, const ScalingOptions& options) {
  if (sizes.empty()) throw std::invalid_argument("scaling benchmark needs at least one size");
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int largest = *std::max_element(sizes.begin(), sizes.end());
  for (int s : sizes)
    if (s < 8 || largest % s != 0) throw std::invalid_argument("scaling sizes must be >= 8 and divide the largest size");

  const Dem base = synth_terrain(options.seed, largest, 1.0);
  PlannerConfig cfg;
  cfg.omega = options.omega;
  cfg.graph_mode = GraphMode::kPrebuilt;

  std::vector<ScalingRow> rows;
  for (int s : sizes) {
    const CostMap cost = compute_cost_map(pool_dem(base, largest / s));
    ScalingRow row;
    row.size = s;
    row.start = nearest_free(cost, options.start_fx, options.start_fy, cfg.obstacle_threshold);
    row.goal = nearest_free(cost, options.goal_fx, options.goal_fy, cfg.obstacle_threshold);

    PlanResult plan = astar_plan(cost, row.start, row.goal, cfg);  // warm-up
    std::vector<double> graphing;
    std::vector<double> search;
    for (int t = 0; t < options.trials; ++t) {
      plan = astar_plan(cost, row.start, row.goal, cfg);
      graphing.push_back(plan.telemetry.graphing_time);
      search.push_back(plan.telemetry.search_time);
    }
    if (!plan.ok()) throw std::runtime_error("scaling instance unsolvable at size " + std::to_string(s));
    row.graphing_time = median(graphing);
    row.search_time = median(search);
    row.graphing_ratio = row.graphing_time / (row.graphing_time + row.search_time);
    row.path_cells = plan.path.size();
    row.length = plan.stats.length;
    row.graph_nodes = plan.telemetry.graph_nodes;
    row.expansions = plan.telemetry.expansions;
    rows.push_back(row);
  }
  return rows;
}

void write_scaling_csv(std::ostream& out, std::span<const ScalingRow> rows) {
  out << "size,graphing_time_s,search_time_s,graphing_ratio,path_cells,length,graph_nodes,expansions,start_x,start_y,"
         "goal_x,goal_y\n";
  out << std::setprecision(9);
  for (const ScalingRow& r : rows)
    out << r.size << ',' << r.graphing_time << ',' << r.search_time << ',' << r.graphing_ratio << ',' << r.path_cells
        << ',' << r.length << ',' << r.graph_nodes << ',' << r.expansions << ',' << r.start.x << ',' << r.start.y << ','
        << r.goal.x << ',' << r.goal.y << '\n';
}

SampleRegionSource oracle_sample_region(int radius, double blur_sigma) {
  return [radius, blur_sigma](const Sample& s) {
    return oracle_region(s.label, s.cost.width(), s.cost.height(), radius, blur_sigma);
  };
}

SampleRegionSource model_file_region(std::filesystem::path dir) {
  return [dir = std::move(dir)](const Sample& s) {
    const std::filesystem::path file = dir / (sample_stem(s.meta.index) + ".prob.nnpr");
    if (!std::filesystem::exists(file)) throw std::runtime_error("region file missing: " + file.string());
    ProbabilityMap p = read_grid<ProbabilityMap>(file);
    if (!p.same_shape(s.cost)) throw std::runtime_error("region file shape differs from sample: " + file.string());
    for (double& v : p.values()) v = std::clamp(v, 0.0, 1.0);
    return p;
  };
}

BenchReport bench_masked_vs_full(std::span<const Sample> samples, const SampleRegionSource& region_source,
                                 const MaskedBenchOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  BenchReport report;
  double full_sum = 0.0;
  double masked_sum = 0.0;
  double excess_sum = 0.0;
  double mm_sum = 0.0;
  double fraction_sum = 0.0;
  std::size_t successes = 0;
  std::size_t consistent = 0;

  for (const Sample& sample : samples) {
    const CostMap& cost = sample.cost;
    const Cell start = sample.meta.start;
    const Cell goal = sample.meta.goal;

    BenchRow full;
    full.sample = sample.meta.index;
    full.map_size = cost.width();
    full.method = Method::kAstar;
    PlanResult full_plan = astar_plan(cost, start, goal, options.cfg);  // warm-up
    std::vector<double> full_times;
    for (int t = 0; t < options.trials; ++t)
      full_times.push_back(timed([&] { full_plan = astar_plan(cost, start, goal, options.cfg); }));
    full.at = median(full_times);
    full.success = full_plan.ok();
    full.graphing_time = full_plan.telemetry.graphing_time;
    full.search_time = full_plan.telemetry.search_time;
    full.expansions = full_plan.telemetry.expansions;
    full.graph_nodes = full_plan.telemetry.graph_nodes;
    if (full.success) {
      full.cc = full_plan.stats.cc;
      full.weighted_cost = full_plan.stats.weighted_cost;
      full.path = full_plan.path;
    } else {
      full.note = std::string(to_string(full_plan.status));
    }

    const ProbabilityMap prob = region_source(sample);
    BenchRow masked;
    masked.sample = sample.meta.index;
    masked.map_size = cost.width();
    masked.method = Method::kAstarNN;
    RegionPlanResult rp = region_plan(cost, prob, start, goal, options.cfg, options.policy);  // warm-up
    std::vector<double> masked_times;
    for (int t = 0; t < options.trials; ++t)
      masked_times.push_back(timed([&] { rp = region_plan(cost, prob, start, goal, options.cfg, options.policy); }));
    masked.at = median(masked_times);
    masked.success = rp.plan.ok();
    masked.graphing_time = rp.plan.telemetry.graphing_time;
    masked.search_time = rp.plan.telemetry.search_time;
    masked.expansions = rp.plan.telemetry.expansions;
    masked.graph_nodes = rp.plan.telemetry.graph_nodes;
    masked.mask_area = rp.threshold.mask.area();
    const std::size_t z_label = label_area(sample);
    if (z_label > 0) masked.mm = static_cast<double>(z_label) / static_cast<double>(*masked.mask_area);
    if (rp.threshold.fallback) masked.note = "threshold-fallback";
    if (masked.success) {
      masked.cc = rp.plan.stats.cc;
      masked.weighted_cost = rp.plan.stats.weighted_cost;
      masked.path = rp.plan.path;
    } else {
      masked.note = std::string(to_string(rp.plan.status));
    }

    ++report.summary.pairs;
    full_sum += full.at;
    masked_sum += masked.at;
    fraction_sum += static_cast<double>(*masked.mask_area) / static_cast<double>(cost.size());
    if (masked.mm) mm_sum += *masked.mm;
    if (full.success && masked.success) {
      ++successes;
      if (*full.cc > 0.0) excess_sum += (*masked.cc - *full.cc) / *full.cc * 100.0;
      if (std::abs(*masked.weighted_cost - *full.weighted_cost) <= 1e-9) ++consistent;
    }
    report.rows.push_back(std::move(full));
    report.rows.push_back(std::move(masked));
  }

  MaskedSummary& s = report.summary;
  if (s.pairs > 0) {
    const double n = static_cast<double>(s.pairs);
    s.mean_full_at = full_sum / n;
    s.mean_masked_at = masked_sum / n;
    s.speedup = masked_sum > 0.0 ? full_sum / masked_sum : 0.0;
    s.success_rate = successes / n;
    s.consistent_rate = consistent / n;
    s.mean_mm = mm_sum / n;
    s.mean_mask_fraction = fraction_sum / n;
    s.mean_cc_excess_pct = successes > 0 ? excess_sum / static_cast<double>(successes) : 0.0;
  }
  return report;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "sample,map_size,method,at_s,success,cc,weighted_cost,mm,mask_area,graphing_time_s,search_time_s,expansions,"
         "graph_nodes,path_cells,note\n";
  out << std::setprecision(12);
  for (const BenchRow& r : rows) {
    out << r.sample << ',' << r.map_size << ',' << to_string(r.method) << ',' << r.at << ',' << (r.success ? 1 : 0)
        << ',';
    put_optional(out, r.cc);
    out << ',';
    put_optional(out, r.weighted_cost);
    out << ',';
    put_optional(out, r.mm);
    out << ',';
    put_optional(out, r.mask_area);
    out << ',' << r.graphing_time << ',' << r.search_time << ',' << r.expansions << ',' << r.graph_nodes << ','
        << r.path.size() << ',' << r.note << '\n';
  }
}

}  // namespace tnav
