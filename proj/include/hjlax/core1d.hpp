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

// Closed-form solution of the scalar control problem
//
//   V(x, t; u) = min { integral of gamma(s)^2 / 2 over [0, t] }
//
// over absolutely continuous paths gamma with gamma(0) = u, gamma(t) = x and
// slope constrained to [-b, a] almost everywhere.  The problem is feasible
// exactly when u lies in the band [x - a t, x + b t]; on that band V is a
// piecewise cubic in (x, t, u) and the optimal path is piecewise linear with
// at most three segments whose slopes come from {-b, 0, a}.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "hjlax/types.hpp"

namespace hjlax {

// Per-axis slope bounds: admissible path slopes lie in [-b, a], a, b > 0.
template <typename Scalar>
struct Params1D {
  Scalar a;
  Scalar b;
};

// Qualitative regime of the optimal path for a feasible (x, t, u).  For
// u >= 0 the optimal path starts by descending at slope -b; the "up" tags
// are the mirror images (classification of (-x, t, -u) with a and b swapped)
// covering u < 0.
enum class Region {
  kDownUp,        // descend at -b, then climb at a; never rests at zero
  kDownRestUp,    // descend to zero, rest, then climb to x >= 0
  kDownRestDown,  // descend to zero, rest, then descend to x < 0
  kUpDown,        // mirror of kDownUp
  kUpRestDown,    // mirror of kDownRestUp
  kUpRestUp,      // mirror of kDownRestDown
  kInfeasible,    // u outside [x - a t, x + b t]
};

// One linear piece of an optimal path: position(s) = intercept + slope * s
// for s in [s_start, s_end].
template <typename Scalar>
struct Segment {
  Scalar s_start;
  Scalar s_end;
  Scalar intercept;
  Scalar slope;
};

// Piecewise-linear path on [0, horizon] with at most three contiguous
// segments.  Zero-length segments are dropped at construction, except for
// the degenerate horizon == 0 case which stores a single point segment.
template <typename Scalar>
struct Trajectory1D {
  std::array<Segment<Scalar>, 3> segments{};
  int count = 0;
  Scalar horizon = Scalar(0);

  void push(Scalar s0, Scalar s1, Scalar intercept, Scalar slope) {
    if (s1 > s0) segments[static_cast<std::size_t>(count++)] = {s0, s1, intercept, slope};
  }
};

namespace detail {

template <typename Scalar>
inline void check_bounds(const Params1D<Scalar>& p, const char* fn) {
  if (!(std::isfinite(p.a) && std::isfinite(p.b) && p.a > Scalar(0) && p.b > Scalar(0))) {
    throw std::invalid_argument(std::string(fn) + ": slope bounds must be finite and positive");
  }
}

template <typename Scalar>
inline void check_point(Scalar x, Scalar t, Scalar u, const Params1D<Scalar>& p, const char* fn) {
  check_bounds(p, fn);
  if (!all_finite<Scalar>({x, t, u}) || t < Scalar(0)) {
    throw std::invalid_argument(std::string(fn) + ": x, u must be finite and t >= 0");
  }
}

// Branch values of V, each exact only on its own regime (u >= 0 throughout).
// kDownUp:      w is the lowest point of the path, reached where the descent
//               meets the climb.
// kDownRestUp:  path rests at zero, so the turning term drops out.
// kDownRestDown: x < 0, final leg descends, contributing -x^3 / (6 b).
template <typename Scalar>
inline Scalar branch_down_up(Scalar x, Scalar t, Scalar u, Scalar a, Scalar b) {
  const Scalar w = (a * u + b * x - a * b * t) / (a + b);
  return cube(u) / (6 * b) + cube(x) / (6 * a) -
         (1 / (6 * a) + 1 / (6 * b)) * cube(w);
}

template <typename Scalar>
inline Scalar branch_down_rest_up(Scalar x, Scalar u, Scalar a, Scalar b) {
  return cube(u) / (6 * b) + cube(x) / (6 * a);
}

template <typename Scalar>
inline Scalar branch_down_rest_down(Scalar x, Scalar u, Scalar b) {
  return cube(u) / (6 * b) - cube(x) / (6 * b);
}

}  // namespace detail

// Absolute slack used for the feasibility band test, scaled to the magnitudes
// involved so that boundary points produced by floating arithmetic are kept.
template <typename Scalar>
Scalar feasibility_slack(Scalar x, Scalar t, Scalar u, const Params1D<Scalar>& p) {
  using std::abs;
  return Scalar(1e-12) * (Scalar(1) + abs(x) + abs(u) + p.a * t + p.b * t);
}

// Classifies (x, t, u).  Feasible u >= 0 lies in the no-rest regime exactly
// when a u + b x - a b t >= 0 (the descent meets the climb at height >= 0);
// otherwise the path rests at zero and the sign of x picks the final leg.
// Boundary cases use closed inequalities, tested in this order.
template <typename Scalar>
Region classify_region(Scalar x, Scalar t, Scalar u, const Params1D<Scalar>& p) {
  detail::check_point(x, t, u, p, "classify_region");
  const Scalar slack = feasibility_slack(x, t, u, p);
  if (u < x - p.a * t - slack || u > x + p.b * t + slack) return Region::kInfeasible;
  if (u >= Scalar(0)) {
    if (p.a * u + p.b * x - p.a * p.b * t >= Scalar(0)) return Region::kDownUp;
    return x >= Scalar(0) ? Region::kDownRestUp : Region::kDownRestDown;
  }
  // Mirror image: classify (-x, t, -u) with bounds (b, a).
  if (p.b * (-u) + p.a * (-x) - p.a * p.b * t >= Scalar(0)) return Region::kUpDown;
  return -x >= Scalar(0) ? Region::kUpRestDown : Region::kUpRestUp;
}

// Value of the scalar problem.  Returns +infinity off the feasibility band,
// 0 when t == 0 and u == x (within slack), and the branch value otherwise,
// clamped to be nonnegative.  The u < 0 half is evaluated through the exact
// mirror identity V(x, t; u, a, b) = V(-x, t; -u, b, a), so that symmetry
// holds bit for bit.
template <typename Scalar>
Scalar value_1d(Scalar x, Scalar t, Scalar u, const Params1D<Scalar>& p) {
  using std::abs;
  detail::check_point(x, t, u, p, "value_1d");
  const Scalar slack = feasibility_slack(x, t, u, p);
  if (t == Scalar(0)) return abs(u - x) <= slack ? Scalar(0) : infinity<Scalar>();
  if (u < x - p.a * t - slack || u > x + p.b * t + slack) return infinity<Scalar>();
  if (u < Scalar(0)) return value_1d(-x, t, -u, Params1D<Scalar>{p.b, p.a});
  const Scalar a = p.a;
  const Scalar b = p.b;
  Scalar v;
  if (a * u + b * x - a * b * t >= Scalar(0)) {
    v = detail::branch_down_up(x, t, u, a, b);
  } else if (x >= Scalar(0)) {
    v = detail::branch_down_rest_up(x, u, a, b);
  } else {
    v = detail::branch_down_rest_down(x, u, b);
  }
  return v > Scalar(0) ? v : Scalar(0);
}

// Branch-free form of the same value: for u >= 0,
//
//   V = max( V_rest_down, min( V_down_up, V_rest_up ) ),
//
// evaluated on all three branch formulas at once.  The inner min selects
// between the no-rest and rest-up branches (the no-rest value exceeds the
// rest-up value exactly when the turning point w would be negative); the
// outer max then corrects the sign of the final leg for x < 0.  Agrees with
// value_1d to roundoff on the whole band.
template <typename Scalar>
Scalar value_1d_equivalent(Scalar x, Scalar t, Scalar u, const Params1D<Scalar>& p) {
  using std::abs;
  using std::max;
  using std::min;
  detail::check_point(x, t, u, p, "value_1d_equivalent");
  const Scalar slack = feasibility_slack(x, t, u, p);
  if (t == Scalar(0)) return abs(u - x) <= slack ? Scalar(0) : infinity<Scalar>();
  if (u < x - p.a * t - slack || u > x + p.b * t + slack) return infinity<Scalar>();
  if (u < Scalar(0)) return value_1d_equivalent(-x, t, -u, Params1D<Scalar>{p.b, p.a});
  const Scalar a = p.a;
  const Scalar b = p.b;
  const Scalar v = max(detail::branch_down_rest_down(x, u, b),
                       min(detail::branch_down_up(x, t, u, a, b),
                           detail::branch_down_rest_up(x, u, a, b)));
  return v > Scalar(0) ? v : Scalar(0);
}

// Optimal path for a feasible (x, t, u); throws std::domain_error otherwise.
// Breakpoints are clamped into [0, t], zero-length segments are dropped, and
// the final segment's intercept is formed from x so that the path lands on x
// to roundoff.  t == 0 yields the single point segment [0, 0] at x.  The
// u < 0 half mirrors the u > 0 construction exactly (negated intercepts and
// slopes of the mirrored path).
template <typename Scalar>
Trajectory1D<Scalar> trajectory_1d(Scalar x, Scalar t, Scalar u, const Params1D<Scalar>& p) {
  using std::max;
  const Region region = classify_region(x, t, u, p);
  if (region == Region::kInfeasible) {
    throw std::domain_error("trajectory_1d: u outside the feasibility band [x - a t, x + b t]");
  }
  Trajectory1D<Scalar> traj;
  traj.horizon = t;
  if (t == Scalar(0)) {
    traj.segments[0] = {Scalar(0), Scalar(0), x, Scalar(0)};
    traj.count = 1;
    return traj;
  }
  if (u < Scalar(0)) {
    Trajectory1D<Scalar> m = trajectory_1d(-x, t, -u, Params1D<Scalar>{p.b, p.a});
    for (int i = 0; i < m.count; ++i) {
      m.segments[static_cast<std::size_t>(i)].intercept =
          -m.segments[static_cast<std::size_t>(i)].intercept;
      m.segments[static_cast<std::size_t>(i)].slope =
          -m.segments[static_cast<std::size_t>(i)].slope;
    }
    return m;
  }
  const Scalar a = p.a;
  const Scalar b = p.b;
  const auto clamp_time = [t](Scalar s) { return s < Scalar(0) ? Scalar(0) : (s > t ? t : s); };
  switch (region) {
    case Region::kDownUp: {
      // Descend from u at -b, turn where the climb a (s - t) + x takes over.
      const Scalar turn = clamp_time((u - x + a * t) / (a + b));
      traj.push(Scalar(0), turn, u, -b);
      traj.push(turn, t, x - a * t, a);
      break;
    }
    case Region::kDownRestUp: {
      const Scalar r1 = clamp_time(u / b);
      const Scalar r2 = max(r1, clamp_time(t - x / a));
      traj.push(Scalar(0), r1, u, -b);
      traj.push(r1, r2, Scalar(0), Scalar(0));
      traj.push(r2, t, x - a * t, a);
      break;
    }
    case Region::kDownRestDown: {
      const Scalar r1 = clamp_time(u / b);
      const Scalar r2 = max(r1, clamp_time(t + x / b));
      traj.push(Scalar(0), r1, u, -b);
      traj.push(r1, r2, Scalar(0), Scalar(0));
      traj.push(r2, t, x + b * t, -b);
      break;
    }
    default:
      break;  // unreachable: u >= 0 regimes only
  }
  return traj;
}

// Evaluates a path at time s.  s may exceed [0, horizon] by a few ulps (it is
// clamped); anything farther out throws std::out_of_range.  At a shared
// breakpoint the earlier segment is used.
template <typename Scalar>
Scalar trajectory_eval(const Trajectory1D<Scalar>& traj, Scalar s) {
  if (traj.count <= 0) throw std::out_of_range("trajectory_eval: empty trajectory");
  const Scalar tol =
      Scalar(8) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + traj.horizon);
  if (!(s >= -tol && s <= traj.horizon + tol)) {
    throw std::out_of_range("trajectory_eval: s outside [0, horizon]");
  }
  s = std::min(std::max(s, Scalar(0)), traj.horizon);
  for (int i = 0; i + 1 < traj.count; ++i) {
    const Segment<Scalar>& seg = traj.segments[static_cast<std::size_t>(i)];
    if (s <= seg.s_end) return seg.intercept + seg.slope * s;
  }
  const Segment<Scalar>& last = traj.segments[static_cast<std::size_t>(traj.count - 1)];
  return last.intercept + last.slope * s;
}

// Closed-form evaluation of the optimal path without building segments.
// Four sign cases; in each, the path is a max/min envelope of the descending
// leg, the climbing leg and the rest level.  Matches trajectory_eval on
// trajectory_1d to roundoff for feasible inputs.
template <typename Scalar>
Scalar trajectory_eval_equivalent(Scalar x, Scalar t, Scalar u, const Params1D<Scalar>& p,
                                  Scalar s) {
  using std::max;
  using std::min;
  if (classify_region(x, t, u, p) == Region::kInfeasible) {
    throw std::domain_error(
        "trajectory_eval_equivalent: u outside the feasibility band [x - a t, x + b t]");
  }
  const Scalar tol = Scalar(8) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + t);
  if (!(s >= -tol && s <= t + tol)) {
    throw std::out_of_range("trajectory_eval_equivalent: s outside [0, t]");
  }
  s = min(max(s, Scalar(0)), t);
  if (t == Scalar(0)) return x;
  const Scalar a = p.a;
  const Scalar b = p.b;
  if (u >= Scalar(0)) {
    if (x >= Scalar(0)) return max(max(u - b * s, a * (s - t) + x), Scalar(0));
    return max(u - b * s, Scalar(0)) + min(-b * (s - t) + x, Scalar(0));
  }
  if (x < Scalar(0)) return min(min(u + a * s, -b * (s - t) + x), Scalar(0));
  return min(u + a * s, Scalar(0)) + max(a * (s - t) + x, Scalar(0));
}

// Convex positively-one-homogeneous support function of the slope band:
// K(p) = a p for p >= 0 and -b p for p < 0.
template <typename Scalar>
Scalar hamiltonian_k(Scalar p_grad, const Params1D<Scalar>& p) {
  detail::check_bounds(p, "hamiltonian_k");
  if (!std::isfinite(p_grad)) {
    throw std::invalid_argument("hamiltonian_k: argument must be finite");
  }
  return p_grad >= Scalar(0) ? p.a * p_grad : -p.b * p_grad;
}

}  // namespace hjlax
