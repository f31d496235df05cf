// SPDX-License-Identifier: Apache-2.0

#include "tnav/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "tnav/calibration.hpp"
#include "tnav/dataset.hpp"
#include "tnav/dynamic_sim.hpp"
#include "tnav/raster_io.hpp"
#include "tnav/region.hpp"
#include "tnav/search.hpp"
#include "tnav/terrain.hpp"
#include "tnav/timing.hpp"

namespace tnav {

namespace {

namespace fs = std::filesystem;

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: " + std::string(s));
  return v;
}

Cell parse_cell(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("expected X,Y but got '" + s + "'");
  return Cell{parse_int(std::string_view(s).substr(0, comma)), parse_int(std::string_view(s).substr(comma + 1))};
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_int(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

// Accepts a single-channel cost raster or a dataset sample (cost, start, goal).
CostMap read_cost_map(const fs::path& path) {
  if (is_nnpr_file(path)) {
    const RasterStack stack = read_nnpr(path);
    if (stack.channels.size() == 3) return stack.channel<CostMap>(0);
  }
  return read_grid<CostMap>(path);
}

GraphMode parse_graph_mode(const std::string& s) {
  if (s == "prebuilt") return GraphMode::kPrebuilt;
  if (s == "lazy") return GraphMode::kLazy;
  throw std::invalid_argument("graph mode must be prebuilt or lazy");
}

void write_raster(const fs::path& path, const Grid<double>& grid, const std::string& format, double cell_size = 1.0) {
  if (format == "ascii") {
    write_ascii_grid(path, grid, cell_size);
  } else {
    RasterStack stack;
    stack.add(grid);
    write_nnpr(path, stack);
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

// Options shared by several subcommands.
struct Common {
  std::string map, prob, label, start, goal, out, format = "nnpr", graph = "prebuilt";
  double omega = 0.011;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  int size = 64;
  int trials = 3;
};

struct NoPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PlannerConfig planner_config(const Common& c) {
  PlannerConfig cfg;
  cfg.omega = c.omega;
  cfg.graph_mode = parse_graph_mode(c.graph);
  cfg.validate();
  return cfg;
}

void print_plan(std::ostream& out, const PlanResult& r, double seconds) {
  out << std::setprecision(10) << "L=" << r.stats.length << " CC=" << r.stats.cc
      << " weighted=" << r.stats.weighted_cost << " cells=" << r.path.size() << " time=" << seconds
      << "s graphing=" << r.telemetry.graphing_time << "s search=" << r.telemetry.search_time
      << "s expansions=" << r.telemetry.expansions << '\n';
}

int run_cost(const Common& c, double cell_size, double ruggedness, std::ostream& out) {
  const Dem dem = c.map.empty() ? synth_terrain(c.seed, c.size, ruggedness) : read_dem(c.map, cell_size);
  Stopwatch clock;
  const CostMap cost = compute_cost_map(dem);
  const double seconds = clock.seconds();
  std::size_t obstacles = 0;
  double sum = 0.0;
  for (double v : cost.values()) {
    obstacles += v >= 1.0;
    sum += v;
  }
  if (!c.out.empty()) write_raster(c.out, cost, c.format, dem.cell_size());
  out << std::setprecision(6) << "size=" << cost.width() << 'x' << cost.height() << " obstacles=" << obstacles
      << " obstacle_fraction=" << static_cast<double>(obstacles) / cost.size()
      << " mean_cost=" << sum / cost.size() << " time=" << seconds << "s\n";
  return kExitOk;
}

int run_plan(const Common& c, std::ostream& out, std::ostream& err) {
  const CostMap cost = read_cost_map(c.map);
  const PlannerConfig cfg = planner_config(c);
  Stopwatch clock;
  const PlanResult r = astar_plan(cost, parse_cell(c.start), parse_cell(c.goal), cfg);
  const double seconds = clock.seconds();
  if (!r.ok()) {
    err << "no path: " << to_string(r.status) << '\n';
    return kExitNoPath;
  }
  print_plan(out, r, seconds);
  if (!c.out.empty()) write_path_text(c.out, r.path);
  return kExitOk;
}

int run_sweep(const Common& c, double omega_max, double omega_step, std::ostream& out, std::ostream& err) {
  const CostMap cost = read_cost_map(c.map);
  const Cell start = parse_cell(c.start), goal = parse_cell(c.goal);
  PlannerConfig probe;
  probe.omega = 0.0;
  probe.graph_mode = GraphMode::kLazy;
  if (const PlanResult r = astar_plan(cost, start, goal, probe); !r.ok()) {
    err << "no path: " << to_string(r.status) << '\n';
    return kExitNoPath;
  }
  const std::vector<double> grid = omega_grid(0.0, omega_max, omega_step);
  const OmegaSweep sweep = sweep_omega(cost, start, goal, grid);
  if (!c.out.empty()) {
    std::ofstream f = open_out(c.out);
    write_sweep_csv(f, sweep);
  }
  out << std::setprecision(10) << "omega_star=" << sweep.omega_star << " interior=" << sweep.interior_optimum()
      << " L(0)=" << sweep.lengths.front() << " L(max)=" << sweep.lengths.back() << '\n';
  return kExitOk;
}

int run_gen_dataset(const Common& c, int count, std::optional<double> min_sep, std::ostream& out) {
  if (c.out.empty()) throw std::invalid_argument("gen-dataset needs --out DIR");
  DatasetSpec spec;
  spec.count = count;
  spec.size = c.size;
  spec.omega = c.omega;
  spec.seed = c.seed;
  spec.min_separation = min_sep;
  spec.encoding.sigma = c.sigma;
  spec.validate();
  Stopwatch clock;
  const std::vector<Sample> samples = generate_dataset(spec);
  write_dataset(c.out, samples);
  out << "samples=" << samples.size() << " size=" << spec.size << " dir=" << c.out << " time=" << clock.seconds()
      << "s\n";
  return kExitOk;
}

int run_region_plan(const Common& c, bool fallback, std::ostream& out, std::ostream& err) {
  const CostMap cost = read_cost_map(c.map);
  ProbabilityMap prob = read_grid<ProbabilityMap>(c.prob);
  if (!prob.same_shape(cost)) prob = rescale_region(prob, cost.width(), cost.height());
  const PlannerConfig cfg = planner_config(c);
  Stopwatch clock;
  const RegionPlanResult r = region_plan(cost, prob, parse_cell(c.start), parse_cell(c.goal), cfg, {}, fallback);
  const double seconds = clock.seconds();
  out << std::setprecision(10) << "td=" << r.threshold.td << " area=" << r.threshold.mask.area()
      << " fraction=" << static_cast<double>(r.threshold.mask.area()) / cost.size()
      << " threshold_fallback=" << r.threshold.fallback << " full_map_fallback=" << r.full_map_fallback << '\n';
  if (!r.plan.ok()) {
    err << "no path: " << to_string(r.plan.status) << '\n';
    return kExitNoPath;
  }
  print_plan(out, r.plan, seconds);
  if (!c.out.empty()) write_path_text(c.out, r.plan.path);
  return kExitOk;
}

int run_bench(const Common& c, const std::string& kind, const std::string& sizes, const std::string& dataset,
              int count, const std::string& region, const std::string& prob_dir, int radius, std::ostream& out) {
  if (kind == "scaling") {
    const std::vector<int> list = parse_int_list(sizes);
    ScalingOptions opts;
    opts.seed = c.seed;
    opts.trials = c.trials;
    opts.omega = c.omega;
    const std::vector<ScalingRow> rows = bench_scaling(list, opts);
    if (!c.out.empty()) {
      std::ofstream f = open_out(c.out);
      write_scaling_csv(f, rows);
    }
    write_scaling_csv(out, rows);
    return kExitOk;
  }

  std::vector<Sample> samples;
  if (!dataset.empty()) {
    samples = read_dataset(dataset);
  } else {
    DatasetSpec spec;
    spec.count = count;
    spec.size = c.size;
    spec.omega = c.omega;
    spec.seed = c.seed;
    samples = generate_dataset(spec);
  }
  SampleRegionSource source;
  if (region == "oracle")
    source = oracle_sample_region(radius);
  else
    source = model_file_region(prob_dir.empty() ? dataset : prob_dir);

  MaskedBenchOptions opts;
  opts.trials = c.trials;
  opts.cfg = planner_config(c);
  const BenchReport report = bench_masked_vs_full(samples, source, opts);
  if (!c.out.empty()) {
    std::ofstream f = open_out(c.out);
    write_bench_csv(f, report.rows);
  }
  const MaskedSummary& s = report.summary;
  out << std::setprecision(6) << "pairs=" << s.pairs << " mean_full_at=" << s.mean_full_at
      << "s mean_masked_at=" << s.mean_masked_at << "s speedup=" << s.speedup
      << " cc_excess_pct=" << s.mean_cc_excess_pct << " success_rate=" << s.success_rate
      << " consistent_rate=" << s.consistent_rate << " mean_mm=" << s.mean_mm
      << " mean_mask_fraction=" << s.mean_mask_fraction << '\n';
  return kExitOk;
}

int run_dynamic(const Common& c, const std::string& method, bool static_scene, bool verify, int radius,
                std::ostream& out) {
  const DynamicScenario scenario = make_dynamic_scenario(c.seed, c.size, !static_scene);
  std::vector<Method> methods;
  if (method == "all")
    methods = {Method::kAstar, Method::kAstarNN, Method::kDstar, Method::kDstarNN};
  else
    methods = {parse_method(method)};

  const FrameRegionSource region = oracle_frame_region(c.omega, radius);
  SimOptions opts;
  opts.cfg = planner_config(c);
  opts.verify_with_astar = verify;

  std::vector<DynamicRunReport> runs;
  bool all_reached = true;
  for (Method m : methods) {
    runs.push_back(dynamic_sim(scenario, m, &region, opts));
    const DynamicRunReport& r = runs.back();
    all_reached = all_reached && r.reached_goal;
    out << std::setprecision(6) << to_string(m) << ": frames=" << r.frames.size() << " reached=" << r.reached_goal
        << " total_at=" << r.total_at << "s executed_cells=" << r.executed.size() << " executed_cc=" << r.executed_cc;
    if (!r.failure.empty()) out << " failure=\"" << r.failure << '"';
    out << '\n';
  }
  if (!c.out.empty()) {
    std::ofstream f = open_out(c.out);
    write_dynamic_csv(f, runs);
  }
  return all_reached ? kExitOk : kExitNoPath;
}

int run_mm(const Common& c, std::ostream& out) {
  const ProbabilityMap prob = read_grid<ProbabilityMap>(c.prob);
  const GridPath label = read_path_text(c.label);
  if (label.empty()) throw std::invalid_argument("label path is empty");
  const Cell start = c.start.empty() ? label.cells.front() : parse_cell(c.start);
  const Cell goal = c.goal.empty() ? label.cells.back() : parse_cell(c.goal);
  if (!prob.contains(start) || !prob.contains(goal)) throw std::invalid_argument("endpoints off the probability map");
  const ThresholdResult th = adaptive_threshold(prob, start, goal);
  const RegionReport rep = region_report(label, th);
  out << std::setprecision(17) << "td=" << rep.td << " area=" << rep.area << " mm=" << rep.mm << '\n';
  return kExitOk;
}

}  // namespace

int cli_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Terrain cost maps, weighted A*, heuristic regions and planning benchmarks", "tnav"};
  app.require_subcommand(1);

  Common c;
  auto add_map = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--map", c.map, "Map raster (NNPR or ASCII grid)");
    if (required) o->required();
  };
  auto add_endpoints = [&](CLI::App* s, bool required) {
    auto* a = s->add_option("--start", c.start, "Start cell X,Y");
    auto* b = s->add_option("--goal", c.goal, "Goal cell X,Y");
    if (required) a->required(), b->required();
  };
  auto add_planner = [&](CLI::App* s) {
    s->add_option("--omega", c.omega, "Cost weight omega")->check(CLI::NonNegativeNumber);
    s->add_option("--graph", c.graph, "Graph mode")->check(CLI::IsMember({"prebuilt", "lazy"}));
  };

  double cell_size = 1.0, ruggedness = 1.0;
  auto* cost = app.add_subcommand("cost", "DEM to traversal cost map");
  add_map(cost, false);
  cost->add_option("--cell-size", cell_size, "Cell size in metres for NNPR DEMs")->check(CLI::PositiveNumber);
  cost->add_option("--seed", c.seed, "Synthetic terrain seed (when --map is absent)");
  cost->add_option("--size", c.size, "Synthetic terrain side")->check(CLI::Range(8, 1 << 14));
  cost->add_option("--ruggedness", ruggedness, "Synthetic terrain ruggedness")->check(CLI::NonNegativeNumber);
  cost->add_option("--out", c.out, "Output cost map");
  cost->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"nnpr", "ascii"}));

  auto* plan = app.add_subcommand("plan", "Full-map A*");
  add_map(plan, true);
  add_endpoints(plan, true);
  add_planner(plan);
  plan->add_option("--out", c.out, "Write the path as text");

  double omega_max = 0.2, omega_step = 0.001;
  auto* sweep = app.add_subcommand("sweep-omega", "Omega calibration sweep");
  add_map(sweep, true);
  add_endpoints(sweep, true);
  sweep->add_option("--omega-max", omega_max, "Largest omega")->check(CLI::PositiveNumber);
  sweep->add_option("--omega-step", omega_step, "Grid step")->check(CLI::PositiveNumber);
  sweep->add_option("--out", c.out, "CSV report");

  int count = 10;
  std::optional<double> min_sep;
  auto* gen = app.add_subcommand("gen-dataset", "Synthetic training samples");
  gen->add_option("--count", count, "Number of samples")->check(CLI::PositiveNumber);
  gen->add_option("--size", c.size, "Map side")->check(CLI::Range(8, 1 << 14));
  gen->add_option("--seed", c.seed, "Dataset seed");
  gen->add_option("--omega", c.omega, "Label omega")->check(CLI::NonNegativeNumber);
  gen->add_option("--sigma", c.sigma, "Endpoint encoding sigma (cells)")->check(CLI::PositiveNumber);
  gen->add_option("--min-separation", min_sep, "Minimum start-goal distance (cells)");
  gen->add_option("--out", c.out, "Output directory")->required();

  bool fallback = false;
  auto* rplan = app.add_subcommand("region-plan", "Adaptive threshold and masked A*");
  add_map(rplan, true);
  rplan->add_option("--prob", c.prob, "Probability map")->required();
  add_endpoints(rplan, true);
  add_planner(rplan);
  rplan->add_flag("--fallback", fallback, "Retry on the full map if the masked search fails");
  rplan->add_option("--out", c.out, "Write the path as text");

  std::string kind = "masked", sizes = "32,64,128,256", dataset, region = "oracle", prob_dir;
  int radius = 3;
  auto* bench = app.add_subcommand("bench", "Scaling or paired full/masked benchmark");
  bench->add_option("--kind", kind, "Benchmark kind")->check(CLI::IsMember({"scaling", "masked"}));
  bench->add_option("--sizes", sizes, "Comma-separated sizes for the scaling benchmark");
  bench->add_option("--dataset", dataset, "Dataset directory (masked benchmark)");
  bench->add_option("--count", count, "Generated samples when no dataset is given")->check(CLI::PositiveNumber);
  bench->add_option("--size", c.size, "Generated sample side")->check(CLI::Range(8, 1 << 14));
  bench->add_option("--seed", c.seed, "Seed");
  bench->add_option("--region", region, "Region source")->check(CLI::IsMember({"oracle", "model"}));
  bench->add_option("--prob-dir", prob_dir, "Directory with <stem>.prob.nnpr model outputs");
  bench->add_option("--radius", radius, "Oracle region radius")->check(CLI::PositiveNumber);
  bench->add_option("--trials", c.trials, "Timed trials per run")->check(CLI::PositiveNumber);
  add_planner(bench);
  bench->add_option("--out", c.out, "CSV report");

  std::string method = "all";
  bool static_scene = false, verify = false;
  auto* dyn = app.add_subcommand("dynamic-sim", "Moving-obstacle replanning scenario");
  dyn->add_option("--seed", c.seed, "Scenario seed");
  dyn->add_option("--size", c.size, "Map side")->check(CLI::Range(32, 1 << 14));
  dyn->add_option("--method", method, "Astar, AstarNN, Dstar, DstarNN or all");
  dyn->add_option("--radius", radius, "Oracle region radius")->check(CLI::PositiveNumber);
  dyn->add_flag("--static", static_scene, "No moving obstacles");
  dyn->add_flag("--verify", verify, "Also run fresh full-map A* every frame");
  add_planner(dyn);
  dyn->add_option("--out", c.out, "Per-frame CSV report");

  auto* mm = app.add_subcommand("mm", "Model metric of a probability map against a label path");
  mm->add_option("--prob", c.prob, "Probability map")->required();
  mm->add_option("--label", c.label, "Label path text")->required();
  add_endpoints(mm, false);

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitBadInput;
  }

  try {
    if (cost->parsed()) return run_cost(c, cell_size, ruggedness, out);
    if (plan->parsed()) return run_plan(c, out, err);
    if (sweep->parsed()) return run_sweep(c, omega_max, omega_step, out, err);
    if (gen->parsed()) return run_gen_dataset(c, count, min_sep, out);
    if (rplan->parsed()) return run_region_plan(c, fallback, out, err);
    if (bench->parsed()) return run_bench(c, kind, sizes, dataset, count, region, prob_dir, radius, out);
    if (dyn->parsed()) return run_dynamic(c, method, static_scene, verify, radius, out);
    if (mm->parsed()) return run_mm(c, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  return cli_dispatch(args, out, err);
}

}  // namespace tnav
