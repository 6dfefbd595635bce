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

// Execution layer: turns a validated RunConfig into a ready-to-query solver
// (Runner) and implements the solve / slice / traj / bench commands on top
// of it.  Exit codes across commands: 0 success, 1 validation error
// (reported by throwing ConfigError / std::invalid_argument to the caller),
// 2 non-convergence, 3 verification failure.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "hjlax/hjlax.hpp"

namespace hjapp {

struct RunOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;       // 0: hardware default
  std::string out_dir = ".";  // directory for CSV artifacts
  bool json = false;          // machine-readable solve output
};

enum class Mode { kQuadratic, kAdmm, kMinPlus };

// Binds a config to concrete solver objects.  Construction validates the
// strategy/cost/transform combination and throws ConfigError on conflicts
// (for example an exact quadratic strategy with a non-diagonal P).
class Runner {
 public:
  Runner(RunConfig cfg, RunOptions opt);

  const RunConfig& config() const { return cfg_; }
  const RunOptions& options() const { return opt_; }
  Mode mode() const { return mode_; }
  const hjlax::ProblemSpec<double>& spec() const { return spec_; }
  const hjlax::AffineTransform<double>& transform() const { return tr_; }

  hjlax::GeneralSolveResult<double> solve_point(const hjlax::VecX<double>& x, double t) const;

  // x-space path point chi(s) for a previous solve.
  hjlax::VecX<double> path_point(const hjlax::GeneralSolveResult<double>& res, double s) const;

  // Initial cost evaluated in x-space coordinates.
  double initial_cost(const hjlax::VecX<double>& x) const;

 private:
  RunConfig cfg_;
  RunOptions opt_;
  Mode mode_ = Mode::kQuadratic;
  hjlax::ProblemSpec<double> spec_;
  hjlax::AffineTransform<double> tr_;
  hjlax::QuadraticCost<double> quad_;     // x-space cost for the exact path
  hjlax::ProxOracle<double> oracle_;      // canonical-frame oracle for ADMM
  hjlax::MinPlusCost<double> minplus_;    // canonical-frame pieces
  hjlax::AdmmConfig<double> admm_;
};

int cmd_solve(const Runner& runner, const hjlax::VecX<double>& x, double t, std::ostream& os);

// One CSV per configured time, written into options().out_dir as
// slice_t<time>.csv; logs each path to `log`.
int cmd_slice(const Runner& runner, std::ostream& log);

// Writes traj.csv (uniform samples merged with the path breakpoints).
int cmd_traj(const Runner& runner, const hjlax::VecX<double>& x, double t, int samples,
             std::ostream& log);

struct BenchRow {
  Eigen::Index n = 0;
  double mean_seconds = 0.0;
  long trials = 0;
  double checksum = 0.0;  // sum of computed values; pins determinism
  long nonconverged = 0;
  double penalty = 0.0;  // consensus penalty actually used at this size
};

// Random queries x in [-4,4]^n, t in [0,0.5]; input generation is excluded
// from the timed region.
std::vector<BenchRow> run_bench(const RunConfig& cfg, const RunOptions& opt,
                                const std::vector<Eigen::Index>& dims, long trials);

// Prints a table to `os` and writes bench.csv into options().out_dir.
int cmd_bench(const RunConfig& cfg, const RunOptions& opt, const std::vector<Eigen::Index>& dims,
              long trials, std::ostream& os);

// Shared slice evaluation (also used by the verification suite).
struct SliceData {
  double time = 0.0;
  std::vector<double> axis_i;  // outer loop samples
  std::vector<double> axis_j;  // inner loop samples
  std::vector<double> values;  // row-major: axis_i outer, axis_j inner
  bool converged = true;
};
SliceData compute_slice(const Runner& runner, double t);

// x-space query point for slice cell (xi, xj): the anchor (zeros when
// unset) with the two slice axes overwritten.
hjlax::VecX<double> slice_point(const Runner& runner, double xi, double xj);

std::string slice_file_name(double t);

}  // namespace hjapp
