// Copyright 2026 The hjlax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: solve single points, export value-function slices and
// trajectories as CSV, benchmark per-call cost across dimensions, and run the
// built-in verification suite.
//
// Exit codes: 0 success, 1 validation error, 2 solver non-convergence,
// 3 verification failure.

#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "app/config.hpp"
#include "app/run.hpp"
#include "app/verify.hpp"
#include "hjlax/version.hpp"

namespace {

hjlax::VecX<double> to_vec(const std::vector<double>& v, Eigen::Index dim) {
  if (static_cast<Eigen::Index>(v.size()) != dim) {
    throw hjapp::ConfigError("config: --x must list exactly " + std::to_string(dim) +
                             " entries (one per dimension), got " + std::to_string(v.size()));
  }
  return Eigen::Map<const hjlax::VecX<double>>(v.data(), static_cast<Eigen::Index>(v.size()));
}

hjapp::RunConfig load_or_builtin(const std::string& path, Eigen::Index default_dim) {
  if (!path.empty()) return hjapp::load_config(path);
  return hjapp::builtin_quadratic_config(default_dim);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hjlax: grid-free solver for a class of optimal control problems"};
  app.set_version_flag("--version", std::string(hjlax::kVersionString));

  std::string config_path;
  hjapp::RunOptions opt;
  app.add_option("--config", config_path, "JSON config file (omit for the built-in demo)");
  app.add_flag("--json", opt.json, "machine-readable output for `solve`");
  app.add_option("--seed", opt.seed, "seed recorded in CSV headers and used by `bench`");
  app.add_option("--threads", opt.threads, "worker threads (0: hardware default)");
  app.add_option("--out", opt.out_dir, "output directory for CSV artifacts");

  auto* solve = app.add_subcommand("solve", "solve one point and print the value");
  std::vector<double> solve_x;
  double solve_t = 0.5;
  solve->add_option("--x", solve_x, "query point, one entry per dimension")->required();
  solve->add_option("--time", solve_t, "horizon t >= 0")->required();

  auto* slice = app.add_subcommand("slice", "export 2d value slices, one CSV per time");

  auto* traj = app.add_subcommand("traj", "export an optimal path as traj.csv");
  std::vector<double> traj_x;
  double traj_t = 0.5;
  int traj_samples = 0;
  traj->add_option("--x", traj_x, "query point, one entry per dimension")->required();
  traj->add_option("--time", traj_t, "horizon t >= 0")->required();
  traj->add_option("--samples", traj_samples,
                   "uniform sample count (default: config trajectory_samples)");

  auto* bench = app.add_subcommand("bench", "time the solver across dimensions");
  std::vector<long long> bench_dims{4, 8, 12, 16};
  long long bench_trials = 100000;
  bench->add_option("--dims", bench_dims, "dimensions to time");
  bench->add_option("--trials", bench_trials, "solves per dimension (e.g. 1000000)");

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  std::vector<int> verify_ids;
  verify->add_option("--criteria", verify_ids, "criterion ids (default: all)");

  app.require_subcommand(1);
  for (auto* sub : app.get_subcommands(nullptr)) {
    sub->fallthrough();  // accept global flags after the subcommand too
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Normalize CLI11's per-error exit codes onto the documented contract:
    // usage problems are validation failures (1); --help/--version stay 0.
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (const char* env = std::getenv("HJLAX_THREADS")) {
    try {
      opt.threads = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "error: HJLAX_THREADS must be a non-negative integer, got \"" << env << "\"\n";
      return 1;
    }
  }

  try {
    if (verify->parsed()) {
      const auto outcomes =
          hjapp::verify::run_criteria(verify_ids, opt.threads == 0 ? 1 : opt.threads);
      return hjapp::verify::print_report(outcomes, std::cout);
    }
    if (bench->parsed()) {
      if (bench_trials < 1) throw hjapp::ConfigError("bench: --trials must be >= 1");
      std::vector<Eigen::Index> dims(bench_dims.begin(), bench_dims.end());
      const hjapp::RunConfig cfg = load_or_builtin(config_path, 10);
      return hjapp::cmd_bench(cfg, opt, dims, static_cast<long>(bench_trials), std::cout);
    }

    const hjapp::RunConfig cfg = load_or_builtin(config_path, 10);
    if (solve->parsed()) {
      const hjapp::Runner runner(cfg, opt);
      return hjapp::cmd_solve(runner, to_vec(solve_x, cfg.problem.dim), solve_t, std::cout);
    }
    if (slice->parsed()) {
      const hjapp::Runner runner(cfg, opt);
      return hjapp::cmd_slice(runner, std::cout);
    }
    const hjapp::Runner runner(cfg, opt);
    const int samples = traj_samples > 0 ? traj_samples : cfg.output.trajectory_samples;
    return hjapp::cmd_traj(runner, to_vec(traj_x, cfg.problem.dim), traj_t, samples, std::cout);
  } catch (const hjapp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
