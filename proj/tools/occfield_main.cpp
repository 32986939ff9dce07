/*
 * Copyright 2026 The occfield Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "occfield/carmen.hpp"
#include "occfield/environment.hpp"
#include "occfield/field.hpp"
#include "occfield/grid_map.hpp"
#include "occfield/io.hpp"
#include "occfield/pgm.hpp"
#include "occfield/roc.hpp"
#include "occfield/simulate.hpp"
#include "occfield/training.hpp"

namespace {

namespace fs = std::filesystem;
using namespace occfield;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct LogFlags {
  std::string path;
  double fov_deg = 180.0;
  double max_range = 10.0;
  bool use_robot_pose = false;
  bool skip_errors = false;
};

void add_log_flags(CLI::App* cmd, LogFlags& flags) {
  cmd->add_option("--log", flags.path, "CARMEN log file (FLASER records)");
  cmd->add_option("--log-fov-deg", flags.fov_deg,
                  "Angular span of each FLASER scan, degrees")
      ->capture_default_str();
  cmd->add_option("--log-max-range", flags.max_range,
                  "Sensor max range for the log, meters")
      ->capture_default_str();
  cmd->add_flag("--use-robot-pose", flags.use_robot_pose,
                "Use the robot pose fields instead of the laser pose");
  cmd->add_flag("--skip-errors", flags.skip_errors,
                "Count malformed lines instead of aborting");
}

std::vector<Scan> load_scans_any(const std::string& scans_path,
                                 const LogFlags& log, LogStats* stats_out) {
  if (!scans_path.empty()) {
    std::string path = scans_path;
    if (fs::is_directory(path)) path = (fs::path(path) / "scans.txt").string();
    std::ifstream in = open_input(path);
    return load_scans(in);
  }
  if (log.path.empty()) {
    throw std::runtime_error("need --scans or --log");
  }
  LogSensorConfig config;
  config.field_of_view = log.fov_deg * std::numbers::pi / 180.0;
  config.max_range = log.max_range;
  config.use_robot_pose = log.use_robot_pose;
  config.fail_fast = !log.skip_errors;
  std::ifstream in = open_input(log.path);
  auto [scans, stats] = scans_from_log(in, config);
  if (stats_out != nullptr) *stats_out = stats;
  return scans;
}

BBox scans_bbox(const std::vector<Scan>& scans, double pad) {
  BBox box = BBox::empty_box();
  for (const Scan& scan : scans) {
    box.expand(scan.pose.position);
    for (const Scan::Beam& beam : scan.beams) {
      if (!std::isfinite(beam.range) || beam.range <= kMinBeamRange) continue;
      box.expand(body_to_map(scan.pose,
                             beam.range * Vec2{std::cos(beam.bearing),
                                               std::sin(beam.bearing)}));
    }
  }
  if (box.empty()) {
    throw std::runtime_error("no finite beams: cannot derive a bounding box");
  }
  box.inflate(pad);
  return box;
}

void print_theta_warnings(const Hyperparameters& theta) {
  for (const std::string& warning : theta.warnings()) {
    std::cerr << "warning: " << warning << "\n";
  }
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t scan_count = 24;
};

int run_simulate(const SimulateArgs& args) {
  Benchmark bench = build_benchmark_env(args.seed);
  if (args.scan_count < bench.trajectory.size()) {
    bench.trajectory.resize(args.scan_count);
  }
  const std::vector<Scan> scans =
      simulate_scans(bench.env, bench.trajectory, bench.scan_config);

  fs::create_directories(args.out_dir);
  {
    std::ofstream out = open_output((fs::path(args.out_dir) / "env.txt").string());
    save_environment(bench.env, out);
  }
  {
    std::ofstream out =
        open_output((fs::path(args.out_dir) / "trajectory.txt").string());
    save_trajectory(bench.trajectory, out);
  }
  {
    std::ofstream out =
        open_output((fs::path(args.out_dir) / "scans.txt").string());
    save_scans(scans, out);
  }
  std::size_t beams = 0;
  for (const Scan& s : scans) beams += s.beams.size();
  std::cout << "simulated " << scans.size() << " scans (" << beams
            << " beams) into " << args.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string scans_path;
  LogFlags log;
  std::string theta0_path;
  std::string out_path;
  std::string trace_path;
  TrainingOptions options;
};

int run_train(const TrainArgs& args) {
  const std::vector<Scan> scans = load_scans_any(args.scans_path, args.log,
                                                 nullptr);
  const std::vector<Measurement> beams = beams_from_scans(scans);
  if (beams.empty()) {
    throw std::runtime_error("no usable beams in the input");
  }

  Hyperparameters theta0;
  if (!args.theta0_path.empty()) {
    std::ifstream in = open_input(args.theta0_path);
    theta0 = load_theta(in);
  }

  const OptimizeResult result = optimize(beams, theta0, args.options);
  print_theta_warnings(result.theta);

  if (!args.out_path.empty()) {
    std::ofstream out = open_output(args.out_path);
    save_theta(result.theta, out);
  } else {
    save_theta(result.theta, std::cout);
  }
  if (!args.trace_path.empty()) {
    std::ofstream out = open_output(args.trace_path);
    out << "evaluation,objective,best_objective\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
      out << i << ',' << detail::format_double(result.trace[i].objective)
          << ',' << detail::format_double(result.trace[i].best_objective)
          << '\n';
    }
  }
  std::cout << "beams: " << beams.size()
            << "\nevaluations: " << result.evaluations
            << "\ninitial objective: "
            << detail::format_double(result.initial_objective)
            << "\nfinal objective: "
            << detail::format_double(result.final_objective) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct MapArgs {
  std::string scans_path;
  LogFlags log;
  std::string theta_path;
  std::string method = "field";
  double resolution = 0.1;
  std::vector<double> bbox;  // min_x min_y max_x max_y
  std::string out_path;
  std::string snapshot_path;
  std::string policy = "discard";
  double truncation_factor = 4.0;
  double prior_lambda = 0.0;
  std::size_t threads = 0;
  bool verbatim_sign = false;
};

int run_map(const MapArgs& args) {
  const std::vector<Scan> scans = load_scans_any(args.scans_path, args.log,
                                                 nullptr);
  if (scans.empty()) {
    throw std::runtime_error("no scans in the input");
  }
  Hyperparameters theta;
  if (!args.theta_path.empty()) {
    std::ifstream in = open_input(args.theta_path);
    theta = load_theta(in);
  }
  print_theta_warnings(theta);

  BBox bbox;
  if (args.bbox.size() == 4) {
    bbox = {{args.bbox[0], args.bbox[1]}, {args.bbox[2], args.bbox[3]}};
  } else {
    bbox = scans_bbox(scans, 0.5);
  }

  RasterMap raster;
  if (args.method == "grid") {
    const std::size_t width = static_cast<std::size_t>(
        std::ceil((bbox.max.x - bbox.min.x) / args.resolution - 1e-9));
    const std::size_t height = static_cast<std::size_t>(
        std::ceil((bbox.max.y - bbox.min.y) / args.resolution - 1e-9));
    GridMap grid(bbox.min, args.resolution, std::max<std::size_t>(1, width),
                 std::max<std::size_t>(1, height));
    for (const Scan& scan : scans) grid.update_scan(scan);
    raster = grid.to_raster();
  } else if (args.method == "field") {
    FieldOptions options;
    options.prior_lambda = args.prior_lambda;
    options.truncation_factor = args.truncation_factor;
    options.threads = args.threads;
    options.kernel.verbatim_m_negative_sign = args.verbatim_sign;
    options.max_range_policy = args.policy == "free-only"
                                   ? MaxRangePolicy::kFreeOnly
                                   : MaxRangePolicy::kDiscard;
    OccupancyField field{theta, options};
    std::size_t added = 0, rejected = 0;
    for (const Scan& scan : scans) {
      const AddScanResult r = field.add_scan(scan);
      added += r.added;
      rejected += r.rejected;
    }
    std::cout << "measurements: " << added << " added, " << rejected
              << " rejected\n";
    raster = field.query_grid(bbox, args.resolution);
    if (!args.snapshot_path.empty()) {
      std::ofstream out = open_output(args.snapshot_path);
      save_field(field, out);
    }
  } else {
    throw std::runtime_error("unknown --method '" + args.method +
                             "' (expected field or grid)");
  }

  write_pgm(raster, args.out_path);
  std::cout << "wrote " << raster.width << "x" << raster.height
            << " raster to " << args.out_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RocArgs {
  std::string env_dir;
  std::string theta_path;
  std::string method = "both";
  double grid_resolution = 0.1;
  double eval_resolution = 0.05;
  std::string report_path;
  std::string csv_prefix;
  double truncation_factor = 4.0;
  std::size_t threads = 0;
};

struct MethodRoc {
  std::string name;
  RocResult result;
};

int run_roc(const RocArgs& args) {
  std::ifstream env_in =
      open_input((fs::path(args.env_dir) / "env.txt").string());
  const Environment env = load_environment(env_in);
  std::ifstream traj_in =
      open_input((fs::path(args.env_dir) / "trajectory.txt").string());
  const std::vector<Pose2> trajectory = load_trajectory(traj_in);
  std::ifstream scans_in =
      open_input((fs::path(args.env_dir) / "scans.txt").string());
  const std::vector<Scan> scans = load_scans(scans_in);
  if (scans.empty() || trajectory.empty()) {
    throw std::runtime_error("environment directory has no scans/trajectory");
  }

  Hyperparameters theta;
  if (!args.theta_path.empty()) {
    std::ifstream in = open_input(args.theta_path);
    theta = load_theta(in);
  }
  print_theta_warnings(theta);

  // Evaluation points: a uniform grid over the environment bounds,
  // restricted to what the trajectory could observe.
  const double max_range = scans.front().max_range;
  std::vector<Point2> points;
  std::size_t total_grid_points = 0;
  {
    const BBox bounds = env.bounds();
    for (double y = bounds.min.y + args.eval_resolution / 2;
         y < bounds.max.y; y += args.eval_resolution) {
      for (double x = bounds.min.x + args.eval_resolution / 2;
           x < bounds.max.x; x += args.eval_resolution) {
        ++total_grid_points;
        const Point2 p{x, y};
        for (const Pose2& pose : trajectory) {
          if (squared_norm(p - pose.position) <= max_range * max_range) {
            points.push_back(p);
            break;
          }
        }
      }
    }
  }
  if (points.empty()) {
    throw std::runtime_error("no evaluation points within sensor range");
  }
  const std::vector<int> labels = env.label_points(points);

  std::vector<MethodRoc> rows;
  if (args.method == "field" || args.method == "both") {
    FieldOptions options;
    options.truncation_factor = args.truncation_factor;
    options.threads = args.threads;
    OccupancyField field{theta, options};
    for (const Scan& scan : scans) field.add_scan(scan);
    std::vector<double> scores;
    scores.reserve(points.size());
    for (const Point2& p : points) scores.push_back(field.prob_at(p));
    rows.push_back({"Proposed method", roc(scores, labels)});
  }
  if (args.method == "grid" || args.method == "both") {
    BBox bbox = env.bounds();
    bbox.inflate(args.grid_resolution);
    const std::size_t width = static_cast<std::size_t>(
        std::ceil((bbox.max.x - bbox.min.x) / args.grid_resolution));
    const std::size_t height = static_cast<std::size_t>(
        std::ceil((bbox.max.y - bbox.min.y) / args.grid_resolution));
    GridMap grid(bbox.min, args.grid_resolution, width, height);
    for (const Scan& scan : scans) grid.update_scan(scan);
    std::vector<double> scores;
    scores.reserve(points.size());
    for (const Point2& p : points) {
      scores.push_back(grid.prob_at(p).probability);
    }
    rows.push_back({"Grid map", roc(scores, labels)});
  }
  if (rows.empty()) {
    throw std::runtime_error("unknown --method '" + args.method +
                             "' (expected field, grid or both)");
  }

  std::ostringstream report;
  report << "ROC report\n";
  report << "evaluation points: " << points.size() << " of "
         << total_grid_points << " grid points at "
         << detail::format_double(args.eval_resolution)
         << " m (restricted to within " << detail::format_double(max_range)
         << " m of the trajectory)\n\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s  %22s  %34s\n", "",
                "Area under ROC curve", "FP rate at TP detection rate 0.95");
  report << line;
  std::snprintf(line, sizeof(line), "%-16s  %22.6f  %34.6f\n", "Random guess",
                0.5, 0.95);
  report << line;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {  // grid row first
    std::snprintf(line, sizeof(line), "%-16s  %22.6f  %34.6f\n",
                  it->name.c_str(), it->result.auc,
                  it->result.fpr_at_tpr_095);
    report << line;
  }

  std::cout << report.str();
  if (!args.report_path.empty()) {
    std::ofstream out = open_output(args.report_path);
    out << report.str();
  }
  if (!args.csv_prefix.empty()) {
    for (const MethodRoc& row : rows) {
      const std::string suffix =
          row.name == "Grid map" ? "grid" : "field";
      std::ofstream out = open_output(args.csv_prefix + "_" + suffix + ".csv");
      out << "threshold,tpr,fpr\n";
      for (std::size_t i = 0; i < row.result.thresholds.size(); ++i) {
        out << detail::format_double(row.result.thresholds[i]) << ','
            << detail::format_double(row.result.tpr[i]) << ','
            << detail::format_double(row.result.fpr[i]) << '\n';
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct InfoArgs {
  std::string scans_path;
  LogFlags log;
};

int run_info(const InfoArgs& args) {
  LogStats stats;
  const std::vector<Scan> scans =
      load_scans_any(args.scans_path, args.log, &stats);
  std::size_t beams = 0, max_range_beams = 0;
  std::size_t min_beams = scans.empty() ? 0 : scans.front().beams.size();
  std::size_t max_beams = 0;
  for (const Scan& scan : scans) {
    beams += scan.beams.size();
    min_beams = std::min(min_beams, scan.beams.size());
    max_beams = std::max(max_beams, scan.beams.size());
    for (const Scan::Beam& beam : scan.beams) {
      if (beam.is_max_range) ++max_range_beams;
    }
  }
  std::cout << "scans: " << scans.size() << "\nbeams: " << beams
            << "\nbeams per scan: " << min_beams << ".." << max_beams
            << "\nmax-range beams: " << max_range_beams << "\n";
  if (!scans.empty()) {
    const BBox bbox = scans_bbox(scans, 0.0);
    std::cout << "bbox: [" << detail::format_double(bbox.min.x) << ", "
              << detail::format_double(bbox.min.y) << "] .. ["
              << detail::format_double(bbox.max.x) << ", "
              << detail::format_double(bbox.max.y) << "]\n";
  }
  if (!args.log.path.empty()) {
    std::cout << "odom records: " << stats.odom_records
              << "\nskipped records: " << stats.skipped_records
              << "\nrobotlaser records (unsupported): "
              << stats.robotlaser_records
              << "\nparse errors: " << stats.parse_errors << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous occupancy-field mapping from 2D lidar scans"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  // Flags beat config-file values, config-file values beat defaults.
  auto with_config = [](CLI::App* cmd) {
    cmd->set_config("--config", "",
                    "Read defaults for this command from a key=value file");
    return cmd;
  };

  SimulateArgs simulate_args;
  CLI::App* cmd_simulate = with_config(app.add_subcommand(
      "simulate", "Generate a benchmark world, trajectory and scans"));
  cmd_simulate->add_option("--seed", simulate_args.seed, "Generator seed")
      ->capture_default_str();
  cmd_simulate
      ->add_option("--out", simulate_args.out_dir, "Output directory")
      ->required();
  cmd_simulate
      ->add_option("--scan-count", simulate_args.scan_count,
                   "Number of poses to keep from the trajectory")
      ->capture_default_str();

  TrainArgs train_args;
  CLI::App* cmd_train = with_config(app.add_subcommand(
      "train", "Fit kernel hyperparameters by pseudo-likelihood"));
  cmd_train->add_option("--scans", train_args.scans_path,
                        "Scans file or simulate output directory");
  add_log_flags(cmd_train, train_args.log);
  cmd_train->add_option("--theta0", train_args.theta0_path,
                        "Starting hyperparameters (key=value file)");
  cmd_train->add_option("--out", train_args.out_path,
                        "Output theta file (stdout when omitted)");
  cmd_train->add_option("--trace", train_args.trace_path,
                        "Optional objective trace CSV");
  cmd_train
      ->add_option("--seed", train_args.options.rng_seed,
                   "Seed for subsampling and pseudo points")
      ->capture_default_str();
  cmd_train
      ->add_option("--subsample", train_args.options.beam_subsample,
                   "Fraction of beams used for training")
      ->capture_default_str();
  cmd_train
      ->add_option("--max-evals", train_args.options.max_evaluations,
                   "Objective evaluation budget")
      ->capture_default_str();
  cmd_train
      ->add_option("--tol", train_args.options.relative_tolerance,
                   "Relative convergence tolerance")
      ->capture_default_str();
  cmd_train
      ->add_option("--fraction-low", train_args.options.fraction_low,
                   "Lower bound of the free-point beam fraction")
      ->capture_default_str();
  cmd_train
      ->add_option("--fraction-high", train_args.options.fraction_high,
                   "Upper bound of the free-point beam fraction")
      ->capture_default_str();
  cmd_train
      ->add_option("--threads", train_args.options.threads,
                   "Worker threads (0 = hardware)")
      ->capture_default_str();

  MapArgs map_args;
  CLI::App* cmd_map = with_config(
      app.add_subcommand("map", "Build an occupancy map and render a PGM"));
  cmd_map->add_option("--scans", map_args.scans_path,
                      "Scans file or simulate output directory");
  add_log_flags(cmd_map, map_args.log);
  cmd_map->add_option("--theta", map_args.theta_path,
                      "Hyperparameter file from `train`");
  cmd_map->add_option("--method", map_args.method, "field or grid")
      ->capture_default_str();
  cmd_map->add_option("--res", map_args.resolution, "Raster resolution, m")
      ->capture_default_str();
  cmd_map
      ->add_option("--bbox", map_args.bbox,
                   "min_x min_y max_x max_y (default: derived from data)")
      ->expected(4);
  cmd_map->add_option("--out", map_args.out_path, "Output PGM path")
      ->required();
  cmd_map->add_option("--snapshot", map_args.snapshot_path,
                      "Also save the field snapshot here");
  cmd_map
      ->add_option("--max-range-policy", map_args.policy,
                   "discard or free-only")
      ->capture_default_str();
  cmd_map
      ->add_option("--truncation", map_args.truncation_factor,
                   "Kernel support cutoff in length-scale multiples (>= 3)")
      ->capture_default_str();
  cmd_map->add_option("--prior", map_args.prior_lambda,
                      "Spatially constant prior lambda")
      ->capture_default_str();
  cmd_map
      ->add_option("--threads", map_args.threads,
                   "Worker threads (0 = hardware)")
      ->capture_default_str();
  cmd_map->add_flag("--kernel.verbatim_m_negative_sign",
                    map_args.verbatim_sign,
                    "Reproduce the literal behind-sensor branch sign");

  RocArgs roc_args;
  CLI::App* cmd_roc = with_config(app.add_subcommand(
      "roc", "Score field and grid maps against the simulated ground truth"));
  cmd_roc
      ->add_option("--env", roc_args.env_dir,
                   "Directory produced by `simulate`")
      ->required();
  cmd_roc->add_option("--theta", roc_args.theta_path,
                      "Hyperparameter file from `train`");
  cmd_roc->add_option("--method", roc_args.method, "field, grid or both")
      ->capture_default_str();
  cmd_roc->add_option("--grid-res", roc_args.grid_resolution,
                      "Grid map cell size, m")
      ->capture_default_str();
  cmd_roc->add_option("--eval-res", roc_args.eval_resolution,
                      "Evaluation point spacing, m")
      ->capture_default_str();
  cmd_roc->add_option("--out", roc_args.report_path, "Report output path");
  cmd_roc->add_option("--csv", roc_args.csv_prefix,
                      "Prefix for threshold,tpr,fpr CSV files");
  cmd_roc
      ->add_option("--threads", roc_args.threads,
                   "Worker threads (0 = hardware)")
      ->capture_default_str();

  InfoArgs info_args;
  CLI::App* cmd_info = with_config(
      app.add_subcommand("info", "Print dataset statistics"));
  cmd_info->add_option("--scans", info_args.scans_path,
                       "Scans file or simulate output directory");
  add_log_flags(cmd_info, info_args.log);

  int exit_code = kExitOk;
  cmd_simulate->callback(
      [&] { exit_code = run_simulate(simulate_args); });
  cmd_train->callback([&] { exit_code = run_train(train_args); });
  cmd_map->callback([&] { exit_code = run_map(map_args); });
  cmd_roc->callback([&] { exit_code = run_roc(roc_args); });
  cmd_info->callback([&] { exit_code = run_info(info_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return exit_code;
}
