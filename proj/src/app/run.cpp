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

#include "run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>

#include "csv.hpp"
#include "json.hpp"

namespace hjapp {

using VecXd = hjlax::VecX<double>;
using MatXd = hjlax::MatX<double>;

Runner::Runner(RunConfig cfg, RunOptions opt) : cfg_(std::move(cfg)), opt_(std::move(opt)) {
  const auto& pb = cfg_.problem;
  const Eigen::Index n = pb.dim;
  spec_ = hjlax::ProblemSpec<double>{pb.a, pb.b};
  const MatXd P = pb.P ? *pb.P : MatXd(MatXd::Identity(n, n));
  const VecXd v0 = pb.v0 ? *pb.v0 : VecXd(VecXd::Zero(n));
  try {
    tr_ = hjlax::make_transform(P, v0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: problem.P/problem.v0 rejected: ") + e.what());
  }
  const bool diagonal = hjlax::detail::is_diagonal(tr_.P);
  const bool identity = diagonal && (tr_.P.diagonal().array() == 1.0).all();
  const Strategy strategy = cfg_.solver.strategy;

  admm_.lambda = cfg_.solver.lambda;
  admm_.tol = cfg_.solver.tol;
  admm_.max_iters = cfg_.solver.max_iters;
  admm_.threads = opt_.threads;

  switch (cfg_.cost.kind) {
    case CostKind::kQuadratic: {
      if (strategy == Strategy::kMinPlus) {
        throw ConfigError("config: strategy minplus requires a min_quadratics cost");
      }
      quad_ = hjlax::QuadraticCost<double>{cfg_.cost.lambda, cfg_.cost.center, cfg_.cost.offset};
      if (strategy == Strategy::kQuadratic && !diagonal) {
        throw ConfigError(
            "config: the exact quadratic strategy requires a diagonal P; use strategy admm "
            "(or auto) for a general transform");
      }
      if (strategy == Strategy::kAdmm || !diagonal) {
        mode_ = Mode::kAdmm;
        oracle_ = hjlax::transformed_quadratic_oracle(tr_, quad_);
      } else {
        mode_ = Mode::kQuadratic;
      }
      break;
    }
    case CostKind::kSqL1: {
      if (strategy == Strategy::kQuadratic || strategy == Strategy::kMinPlus) {
        throw ConfigError("config: the sq_l1 cost requires strategy admm (or auto)");
      }
      if (!identity) {
        throw ConfigError(
            "config: the sq_l1 cost requires P to be the identity (a v0 shift is fine)");
      }
      mode_ = Mode::kAdmm;
      oracle_ = hjlax::sq_l1_oracle(VecXd(cfg_.cost.center - tr_.v0));
      break;
    }
    case CostKind::kMinQuadratics: {
      if (strategy == Strategy::kQuadratic || strategy == Strategy::kAdmm) {
        throw ConfigError("config: the min_quadratics cost requires strategy minplus (or auto)");
      }
      mode_ = Mode::kMinPlus;
      minplus_.admm = admm_;
      for (const auto& piece : cfg_.cost.pieces) {
        if (identity) {
          minplus_.pieces.emplace_back(hjlax::QuadraticCost<double>{
              piece.lambda, VecXd(piece.center - tr_.v0), piece.offset});
        } else {
          minplus_.pieces.emplace_back(hjlax::transformed_quadratic_oracle(
              tr_, hjlax::QuadraticCost<double>{piece.lambda, piece.center, piece.offset}));
        }
      }
      break;
    }
  }
}

hjlax::GeneralSolveResult<double> Runner::solve_point(const VecXd& x, double t) const {
  switch (mode_) {
    case Mode::kQuadratic:
      return hjlax::solve_general(tr_, spec_, quad_, x, t, opt_.threads);
    case Mode::kAdmm:
      return hjlax::solve_general(tr_, spec_, oracle_, x, t, admm_);
    case Mode::kMinPlus:
      return hjlax::solve_general(tr_, spec_, minplus_, x, t, opt_.threads);
  }
  throw std::logic_error("Runner: unreachable mode");
}

VecXd Runner::path_point(const hjlax::GeneralSolveResult<double>& res, double s) const {
  return hjlax::trajectory_point(tr_, res.canonical.trajectory, s);
}

double Runner::initial_cost(const VecXd& x) const {
  switch (cfg_.cost.kind) {
    case CostKind::kQuadratic:
      return quad_(x);
    case CostKind::kSqL1: {
      const double s = (x - cfg_.cost.center).cwiseAbs().sum();
      return 0.5 * s * s;
    }
    case CostKind::kMinQuadratics: {
      double best = hjlax::infinity<double>();
      for (const auto& piece : cfg_.cost.pieces) {
        const double v = 0.5 * piece.lambda * (x - piece.center).squaredNorm() + piece.offset;
        best = std::min(best, v);
      }
      return best;
    }
  }
  throw std::logic_error("Runner: unreachable cost kind");
}

namespace {

std::vector<double> vec_to_std(const VecXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void write_metadata(CsvWriter& w, const Runner& runner, const char* command) {
  w.comment("version", hjlax::kVersionString);
  w.comment("seed", std::to_string(runner.options().seed));
  w.comment("config", runner.config().hash);
  w.comment("command", command);
}

std::ofstream open_artifact(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config: cannot write '" + path + "'");
  return f;
}

}  // namespace

int cmd_solve(const Runner& runner, const VecXd& x, double t, std::ostream& os) {
  const auto res = runner.solve_point(x, t);
  const auto& diag = res.canonical.diagnostics;
  const bool minplus = runner.mode() == Mode::kMinPlus;
  if (runner.options().json) {
    nlohmann::json out{{"value", res.value},      {"converged", diag.converged},
                       {"iterations", diag.iterations}, {"t", t},
                       {"x", vec_to_std(x)},      {"minimizer", vec_to_std(res.minimizer)},
                       {"start", vec_to_std(res.start)}};
    if (minplus) {
      out["selected_piece"] = diag.selected_piece + 1;  // 1-based, as in the CSV column
      out["piece_values"] = diag.piece_values;
    }
    os << out.dump(2) << "\n";
  } else {
    os << "value: " << format_g17(res.value) << "\n";
    os << "converged: " << (diag.converged ? "yes" : "no") << "\n";
    os << "iterations: " << diag.iterations << "\n";
    if (minplus) os << "piece: " << diag.selected_piece + 1 << "\n";
    os << "minimizer:";
    for (Eigen::Index i = 0; i < res.minimizer.size(); ++i) {
      os << ' ' << format_g17(res.minimizer[i]);
    }
    os << "\nstart:";
    for (Eigen::Index i = 0; i < res.start.size(); ++i) os << ' ' << format_g17(res.start[i]);
    os << "\n";
  }
  return diag.converged ? 0 : 2;
}

VecXd slice_point(const Runner& runner, double xi, double xj) {
  const auto& out = runner.config().output;
  const Eigen::Index n = runner.config().problem.dim;
  VecXd x = out.anchor ? *out.anchor : VecXd(VecXd::Zero(n));
  x[out.axes[0] - 1] = xi;
  x[out.axes[1] - 1] = xj;
  return x;
}

namespace {

std::vector<double> axis_samples(double lo, double hi, int grid) {
  std::vector<double> s(static_cast<std::size_t>(grid));
  if (grid == 1) {
    s[0] = lo;
    return s;
  }
  for (int k = 0; k < grid; ++k) {
    s[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (grid - 1);
  }
  return s;
}

void check_slice_axes(const Runner& runner) {
  const auto& out = runner.config().output;
  const Eigen::Index n = runner.config().problem.dim;
  if (out.axes[0] == out.axes[1] || out.axes[0] < 1 || out.axes[1] < 1 || out.axes[0] > n ||
      out.axes[1] > n) {
    throw ConfigError("config: slice output needs two distinct axes in [1, dim]");
  }
}

}  // namespace

SliceData compute_slice(const Runner& runner, double t) {
  check_slice_axes(runner);
  const auto& out = runner.config().output;
  SliceData data;
  data.time = t;
  data.axis_i = axis_samples(out.range[0], out.range[1], out.grid);
  data.axis_j = axis_samples(out.range[0], out.range[1], out.grid);
  const Eigen::Index ni = static_cast<Eigen::Index>(data.axis_i.size());
  const Eigen::Index nj = static_cast<Eigen::Index>(data.axis_j.size());
  data.values.assign(static_cast<std::size_t>(ni * nj), 0.0);
  std::vector<unsigned char> ok(static_cast<std::size_t>(ni * nj), 1);
  hjlax::parallel_for(ni * nj, runner.options().threads, 1, [&](Eigen::Index idx) {
    const Eigen::Index r = idx / nj;
    const Eigen::Index c = idx % nj;
    const VecXd x = slice_point(runner, data.axis_i[static_cast<std::size_t>(r)],
                                data.axis_j[static_cast<std::size_t>(c)]);
    const auto res = runner.solve_point(x, t);
    data.values[static_cast<std::size_t>(idx)] = res.value;
    ok[static_cast<std::size_t>(idx)] = res.canonical.diagnostics.converged ? 1 : 0;
  });
  data.converged = std::all_of(ok.begin(), ok.end(), [](unsigned char c) { return c == 1; });
  return data;
}

std::string slice_file_name(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "slice_t%g.csv", t);
  return buf;
}

int cmd_slice(const Runner& runner, std::ostream& log) {
  check_slice_axes(runner);
  const auto& out = runner.config().output;
  bool all_converged = true;
  for (const double t : out.times) {
    const SliceData data = compute_slice(runner, t);
    all_converged = all_converged && data.converged;
    const std::filesystem::path path =
        std::filesystem::path(runner.options().out_dir) / slice_file_name(t);
    auto f = open_artifact(path.string());
    CsvWriter w(f);
    write_metadata(w, runner, "slice");
    w.comment("time", format_g17(t));
    w.comment("converged", data.converged ? "yes" : "no");
    w.header({"x" + std::to_string(out.axes[0]), "x" + std::to_string(out.axes[1]), "value"});
    for (std::size_t r = 0; r < data.axis_i.size(); ++r) {
      for (std::size_t c = 0; c < data.axis_j.size(); ++c) {
        w.row({data.axis_i[r], data.axis_j[c], data.values[r * data.axis_j.size() + c]});
      }
    }
    log << "wrote " << path.string() << "\n";
  }
  return all_converged ? 0 : 2;
}

int cmd_traj(const Runner& runner, const VecXd& x, double t, int samples, std::ostream& log) {
  if (samples < 2) throw ConfigError("config: traj needs at least 2 samples");
  const auto res = runner.solve_point(x, t);
  const auto& diag = res.canonical.diagnostics;

  std::vector<double> ss;
  ss.reserve(static_cast<std::size_t>(samples) + 8);
  for (int k = 0; k < samples; ++k) {
    ss.push_back(t <= 0.0 ? 0.0 : t * k / (samples - 1));
  }
  for (const auto& traj : res.canonical.trajectory) {
    for (int j = 0; j < traj.count; ++j) {
      const auto& seg = traj.segments[static_cast<std::size_t>(j)];
      ss.push_back(std::clamp(seg.s_start, 0.0, t < 0.0 ? 0.0 : t));
      ss.push_back(std::clamp(seg.s_end, 0.0, t < 0.0 ? 0.0 : t));
    }
  }
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());

  const Eigen::Index n = runner.config().problem.dim;
  const bool minplus = runner.mode() == Mode::kMinPlus;
  const std::filesystem::path path = std::filesystem::path(runner.options().out_dir) / "traj.csv";
  auto f = open_artifact(path.string());
  CsvWriter w(f);
  write_metadata(w, runner, "traj");
  w.comment("time", format_g17(t));
  w.comment("terminal", [&] {
    std::string s;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (i) s += ' ';
      s += format_g17(x[i]);
    }
    return s;
  }());
  w.comment("converged", diag.converged ? "yes" : "no");
  std::vector<std::string> cols{"s"};
  for (Eigen::Index i = 0; i < n; ++i) cols.push_back("x" + std::to_string(i + 1));
  if (minplus) cols.push_back("piece");
  w.header(cols);
  for (const double s : ss) {
    const VecXd p = runner.path_point(res, s);
    std::vector<double> row{s};
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(p[i]);
    if (minplus) row.push_back(static_cast<double>(diag.selected_piece + 1));
    w.row(row);
  }
  log << "wrote " << path.string() << "\n";
  return diag.converged ? 0 : 2;
}

std::vector<BenchRow> run_bench(const RunConfig& cfg, const RunOptions& opt,
                                const std::vector<Eigen::Index>& dims, long trials) {
  if (dims.empty()) throw ConfigError("config: bench needs a non-empty dimension list");
  for (const Eigen::Index n : dims) {
    if (n < 1) throw ConfigError("config: bench dimensions must be at least 1");
  }
  if (trials < 1) throw ConfigError("config: bench needs at least 1 trial");

  std::vector<BenchRow> rows;
  rows.reserve(dims.size());
  for (const Eigen::Index n : dims) {
    RunConfig sized = resize_config(cfg, n);
    if (sized.cost.kind == CostKind::kSqL1) {
      // Benchmark protocol: the consensus penalty is retuned per size.  The
      // squared-l1 curvature grows linearly with n, so a penalty matched to
      // it keeps iteration counts flat and the timings measure per-iteration
      // scaling rather than the conditioning of one fixed penalty.  The
      // retuned value is recorded in bench.csv.
      sized.solver.lambda = 4.0 * static_cast<double>(n);
    }
    const Runner runner(sized, opt);
    hjlax::SplitMix64 rng(hjlax::mix_seed(opt.seed, static_cast<std::uint64_t>(n)));

    BenchRow row;
    row.n = n;
    row.trials = trials;
    row.penalty = sized.solver.lambda;
    const long chunk = std::min<long>(trials, 10000);
    MatXd xs(n, chunk);
    VecXd ts(chunk);
    std::vector<double> sink(static_cast<std::size_t>(chunk));
    std::vector<unsigned char> conv(static_cast<std::size_t>(chunk));
    double total_seconds = 0.0;
    long done = 0;
    while (done < trials) {
      const long count = std::min<long>(chunk, trials - done);
      for (long j = 0; j < count; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) xs(i, j) = rng.uniform(-4.0, 4.0);
        ts[j] = rng.uniform(0.0, 0.5);
      }
      const auto begin = std::chrono::steady_clock::now();
      hjlax::parallel_for(static_cast<Eigen::Index>(count), opt.threads, 1, [&](Eigen::Index j) {
        const auto res = runner.solve_point(VecXd(xs.col(j)), ts[j]);
        sink[static_cast<std::size_t>(j)] = res.value;
        conv[static_cast<std::size_t>(j)] = res.canonical.diagnostics.converged ? 1 : 0;
      });
      const auto end = std::chrono::steady_clock::now();
      total_seconds += std::chrono::duration<double>(end - begin).count();
      for (long j = 0; j < count; ++j) {
        row.checksum += sink[static_cast<std::size_t>(j)];
        if (!conv[static_cast<std::size_t>(j)]) ++row.nonconverged;
      }
      done += count;
    }
    row.mean_seconds = total_seconds / static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

int cmd_bench(const RunConfig& cfg, const RunOptions& opt, const std::vector<Eigen::Index>& dims,
              long trials, std::ostream& os) {
  const auto rows = run_bench(cfg, opt, dims, trials);

  os << "n\tmean_seconds\tper_call_us\n";
  for (const auto& row : rows) {
    char line[96];
    std::snprintf(line, sizeof(line), "%lld\t%.6e\t%.3f\n", static_cast<long long>(row.n),
                  row.mean_seconds, row.mean_seconds * 1e6);
    os << line;
  }

  const std::filesystem::path path = std::filesystem::path(opt.out_dir) / "bench.csv";
  auto f = open_artifact(path.string());
  CsvWriter w(f);
  w.comment("version", hjlax::kVersionString);
  w.comment("seed", std::to_string(opt.seed));
  w.comment("config", cfg.hash);
  w.comment("command", "bench");
  w.comment("threads", std::to_string(hjlax::resolve_threads(opt.threads)));
  for (const auto& row : rows) {
    w.comment("checksum_n" + std::to_string(row.n), format_g17(row.checksum));
    w.comment("penalty_n" + std::to_string(row.n), format_g17(row.penalty));
  }
  w.header({"n", "mean_seconds", "trials"});
  for (const auto& row : rows) {
    w.row({static_cast<double>(row.n), row.mean_seconds, static_cast<double>(row.trials)});
  }
  os << "wrote " << path.string() << "\n";

  long nonconverged = 0;
  for (const auto& row : rows) nonconverged += row.nonconverged;
  return nonconverged == 0 ? 0 : 2;
}

}  // namespace hjapp
