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

// n-dimensional value function with axis-separable dynamics,
//
//   V(x, t) = min over u of  sum_i V_i(x_i, t; u_i) + Phi(u),
//
// where each V_i is the scalar value of core1d.hpp with per-axis slope
// bounds.  For quadratic Phi the minimization splits into n independent
// scalar proximal steps, solved exactly in O(n) total.

#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "hjlax/core1d.hpp"
#include "hjlax/parallel.hpp"
#include "hjlax/prox1d.hpp"
#include "hjlax/types.hpp"

namespace hjlax {

// Per-axis slope bounds a_i, b_i > 0.
template <typename Scalar>
struct ProblemSpec {
  VecX<Scalar> a;
  VecX<Scalar> b;

  Eigen::Index dim() const { return a.size(); }
  Params1D<Scalar> bounds(Eigen::Index i) const { return Params1D<Scalar>{a[i], b[i]}; }
};

// Phi(v) = (lambda / 2) |v - center|^2 + offset, lambda > 0.
template <typename Scalar>
struct QuadraticCost {
  Scalar lambda = Scalar(1);
  VecX<Scalar> center;
  Scalar offset = Scalar(0);

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& v) const {
    return lambda / 2 * (v - center).squaredNorm() + offset;
  }
};

template <typename Scalar>
struct Diagnostics {
  int iterations = 0;
  bool converged = true;
  int selected_piece = -1;                // min-plus winner; -1 otherwise
  std::vector<Scalar> piece_values;       // one entry per min-plus piece
};

template <typename Scalar>
struct SolveResult {
  Scalar value = Scalar(0);
  VecX<Scalar> minimizer;
  std::vector<Trajectory1D<Scalar>> trajectory;  // one scalar path per axis
  Diagnostics<Scalar> diagnostics;
};

namespace detail {

template <typename Scalar>
inline void check_spec(const ProblemSpec<Scalar>& spec, const char* fn) {
  if (spec.a.size() != spec.b.size() || spec.a.size() == 0) {
    throw std::invalid_argument(std::string(fn) + ": bound vectors must be nonempty, same size");
  }
  for (Eigen::Index i = 0; i < spec.a.size(); ++i) {
    if (!(std::isfinite(spec.a[i]) && std::isfinite(spec.b[i]) && spec.a[i] > Scalar(0) &&
          spec.b[i] > Scalar(0))) {
      throw std::invalid_argument(std::string(fn) + ": slope bounds must be finite and positive");
    }
  }
}

template <typename Scalar>
inline void check_state(const ProblemSpec<Scalar>& spec, const VecX<Scalar>& x, Scalar t,
                        const char* fn) {
  check_spec(spec, fn);
  if (x.size() != spec.dim() || !x.allFinite() || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(fn) + ": x must be finite of matching size, t finite");
  }
}

// Degenerate t <= 0 result: the band collapses to the point u = x, so the
// value is Phi(x) and every axis path is the single point x_i.
template <typename Scalar, typename PhiValue>
SolveResult<Scalar> instant_result(const ProblemSpec<Scalar>& spec, PhiValue&& phi,
                                   const VecX<Scalar>& x) {
  const Eigen::Index n = spec.dim();
  SolveResult<Scalar> res;
  res.minimizer = x;
  res.trajectory.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    res.trajectory[static_cast<std::size_t>(i)] =
        trajectory_1d(x[i], Scalar(0), x[i], spec.bounds(i));
  }
  res.value = phi(x);
  return res;
}

// Axis count below which per-axis loops stay serial.
inline constexpr Eigen::Index kAxisSerialCutoff = 64;

}  // namespace detail

// Total objective at control u: sum of scalar values plus Phi(u).  Infinite
// as soon as any axis is infeasible.
template <typename Scalar, typename DerivedU, typename DerivedX, typename PhiValue>
Scalar assemble_value(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedX>& x,
                      Scalar t, const ProblemSpec<Scalar>& spec, PhiValue&& phi) {
  Scalar sum = Scalar(0);
  for (Eigen::Index i = 0; i < spec.dim(); ++i) {
    const Scalar v = value_1d<Scalar>(x[i], t, u[i], spec.bounds(i));
    if (!std::isfinite(v)) return infinity<Scalar>();
    sum += v;
  }
  return sum + phi(u.eval());
}

// Exact solve for quadratic Phi: one independent scalar proximal step per
// axis (weight lambda, center center_i), then the value is assembled from
// the scalar values and Phi at the minimizer.  t <= 0 returns Phi(x) with
// the degenerate point paths.  Axis loops run in parallel only above 64
// axes; `threads` = 0 picks the hardware default.
template <typename Scalar, typename Derived>
SolveResult<Scalar> solve_quadratic(const ProblemSpec<Scalar>& spec,
                                    const QuadraticCost<Scalar>& cost,
                                    const Eigen::MatrixBase<Derived>& x_in, Scalar t,
                                    unsigned threads = 0) {
  const VecX<Scalar> x = x_in;
  detail::check_state(spec, x, t, "solve_quadratic");
  if (cost.center.size() != spec.dim() || !cost.center.allFinite() ||
      !std::isfinite(cost.lambda) || !(cost.lambda > Scalar(0)) || !std::isfinite(cost.offset)) {
    throw std::invalid_argument("solve_quadratic: cost must be finite with lambda > 0");
  }
  if (t <= Scalar(0)) return detail::instant_result(spec, cost, x);

  const Eigen::Index n = spec.dim();
  SolveResult<Scalar> res;
  res.minimizer.resize(n);
  res.trajectory.resize(static_cast<std::size_t>(n));
  parallel_for(n, threads, detail::kAxisSerialCutoff, [&](Eigen::Index i) {
    const ProxQuery<Scalar> q{x[i], t, spec.bounds(i), cost.lambda, cost.center[i]};
    const ProxResult<Scalar> pr = prox_value_1d(q);
    res.minimizer[i] = pr.u_star;
    res.trajectory[static_cast<std::size_t>(i)] = trajectory_1d(x[i], t, pr.u_star, spec.bounds(i));
  });
  res.value = assemble_value(res.minimizer, x, t, spec, cost);
  return res;
}

}  // namespace hjlax
