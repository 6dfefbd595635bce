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

// Independent verification oracles.  These deliberately avoid the closed
// forms they are meant to check: the brute-force solvers discretize the
// control problem directly and optimize with a projected gradient method,
// so every iterate is the exact cost of a genuinely feasible path and the
// result converges to the true value from above.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hjlax/core1d.hpp"
#include "hjlax/prox1d.hpp"
#include "hjlax/rng.hpp"
#include "hjlax/separable.hpp"
#include "hjlax/transform.hpp"
#include "hjlax/types.hpp"

namespace hjlax {

// Exact integral of gamma(s)^2 / 2 over a piecewise-linear path: each sloped
// segment contributes the primitive (c + m s)^3 / (6 m) differenced at the
// segment ends, a rest segment contributes (c^2 / 2) times its length.
template <typename Scalar>
Scalar trajectory_cost(const Trajectory1D<Scalar>& traj) {
  Scalar total = Scalar(0);
  for (int i = 0; i < traj.count; ++i) {
    const Segment<Scalar>& seg = traj.segments[static_cast<std::size_t>(i)];
    if (seg.slope == Scalar(0)) {
      total += seg.intercept * seg.intercept / 2 * (seg.s_end - seg.s_start);
    } else {
      const Scalar p0 = seg.intercept + seg.slope * seg.s_start;
      const Scalar p1 = seg.intercept + seg.slope * seg.s_end;
      total += (detail::cube(p1) - detail::cube(p0)) / (6 * seg.slope);
    }
  }
  return total;
}

namespace detail {

// Projects beta in place onto { alpha in [lo, hi]^K : sum alpha = target }
// by finding the shift theta with sum clamp(beta_j + theta) = target.  The
// shift equation is monotone piecewise linear, so safeguarded Newton (slope
// = number of unclamped entries) inside a bisection bracket converges in a
// handful of passes; `theta` is warm-started across calls.
template <typename Scalar>
class BoxPlaneProjector {
 public:
  BoxPlaneProjector(Scalar lo, Scalar hi) : lo_(lo), hi_(hi) {}

  void project(VecX<Scalar>& beta, Scalar target) {
    const Eigen::Index k = beta.size();
    const Scalar r_tol = Scalar(1e-11) * std::max<Scalar>(Scalar(1), Scalar(k));
    Scalar bracket_lo = lo_ - beta.maxCoeff();   // sum = K lo <= target here
    Scalar bracket_hi = hi_ - beta.minCoeff();   // sum = K hi >= target here
    Scalar theta = std::min(std::max(theta_, bracket_lo), bracket_hi);
    for (int pass = 0; pass < 200; ++pass) {
      Scalar sum = Scalar(0);
      Eigen::Index free_count = 0;
      for (Eigen::Index j = 0; j < k; ++j) {
        const Scalar v = beta[j] + theta;
        if (v <= lo_) {
          sum += lo_;
        } else if (v >= hi_) {
          sum += hi_;
        } else {
          sum += v;
          ++free_count;
        }
      }
      const Scalar r = sum - target;
      if (std::abs(r) <= r_tol) break;
      if (r > Scalar(0)) {
        bracket_hi = theta;
      } else {
        bracket_lo = theta;
      }
      Scalar next = free_count > 0 ? theta - r / Scalar(free_count)
                                   : (bracket_lo + bracket_hi) / 2;
      if (!(next > bracket_lo && next < bracket_hi)) next = (bracket_lo + bracket_hi) / 2;
      theta = next;
    }
    theta_ = theta;
    for (Eigen::Index j = 0; j < k; ++j) {
      beta[j] = std::min(std::max(beta[j] + theta, lo_), hi_);
    }
  }

 private:
  Scalar lo_;
  Scalar hi_;
  Scalar theta_ = Scalar(0);
};

}  // namespace detail

struct BruteForce1DOptions {
  int max_iters = 1500;
  int patience = 80;  // stop after this many iterations without improvement
};

// Discretized scalar control problem: K piecewise-constant slopes alpha_k in
// [-b, a] with delta * sum alpha_k = x - u, positions formed by prefix sums,
// cost the exact integral over the resulting piecewise-linear path.  A
// Barzilai-Borwein projected gradient descends from the straight-line start;
// the best feasible cost seen is returned, hence a true upper bound on
// value_1d that tightens as `steps` grows.
template <typename Scalar>
Scalar brute_force_value_1d(Scalar x, Scalar t, Scalar u, const Params1D<Scalar>& p, int steps,
                            const BruteForce1DOptions& opt = {}) {
  detail::check_point(x, t, u, p, "brute_force_value_1d");
  detail::require(steps >= 1, "brute_force_value_1d: steps must be at least 1");
  const Scalar slack = feasibility_slack(x, t, u, p);
  if (u < x - p.a * t - slack || u > x + p.b * t + slack) {
    throw std::domain_error("brute_force_value_1d: u outside the feasibility band");
  }
  if (t == Scalar(0)) return Scalar(0);

  const Eigen::Index k = steps;
  const Scalar delta = t / Scalar(k);
  const Scalar lo = -p.b;
  const Scalar hi = p.a;
  const Scalar target =
      std::min(std::max((x - u) / delta, Scalar(k) * lo), Scalar(k) * hi);

  VecX<Scalar> nodes(k + 1);
  const auto eval = [&](const VecX<Scalar>& alpha) {
    nodes[0] = u;
    for (Eigen::Index j = 0; j < k; ++j) nodes[j + 1] = nodes[j] + delta * alpha[j];
    Scalar cost = Scalar(0);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Scalar p0 = nodes[j];
      const Scalar p1 = nodes[j + 1];
      cost += p0 * p0 + p0 * p1 + p1 * p1;
    }
    return cost * delta / 6;
  };
  // d cost / d alpha_j = delta * sum_{i > j} g_i where g_i is the node
  // gradient; accumulated as a running suffix sum.
  const auto gradient = [&](VecX<Scalar>& g) {
    Scalar suffix = Scalar(0);
    for (Eigen::Index i = k; i >= 1; --i) {
      const Scalar gi = (i == k) ? delta / 6 * (nodes[i - 1] + 2 * nodes[i])
                                 : delta / 6 * (nodes[i - 1] + 4 * nodes[i] + nodes[i + 1]);
      suffix += gi;
      g[i - 1] = delta * suffix;
    }
  };

  detail::BoxPlaneProjector<Scalar> projector(lo, hi);
  VecX<Scalar> alpha = VecX<Scalar>::Constant(k, target / Scalar(k));
  projector.project(alpha, target);

  const Scalar l_bound = Scalar(0.5) * delta * t * t + std::numeric_limits<Scalar>::min();
  const Scalar step0 = 1 / l_bound;
  Scalar step = step0;
  VecX<Scalar> g(k), g_new(k), alpha_new(k), s(k), yv(k);
  Scalar f = eval(alpha);
  gradient(g);
  Scalar best = f;
  int stagnant = 0;
  for (int iter = 0; iter < opt.max_iters; ++iter) {
    alpha_new = alpha - step * g;
    projector.project(alpha_new, target);
    const Scalar f_new = eval(alpha_new);
    gradient(g_new);
    if (f_new < best - Scalar(1e-14) * (Scalar(1) + std::abs(best))) {
      best = f_new;
      stagnant = 0;
    } else if (++stagnant > opt.patience) {
      break;
    }
    s = alpha_new - alpha;
    yv = g_new - g;
    const Scalar sy = s.dot(yv);
    step = sy > Scalar(0)
               ? std::min(std::max(s.dot(s) / sy, step0 * Scalar(1e-3)), step0 * Scalar(1e3))
               : step0 * Scalar(1e3);
    alpha.swap(alpha_new);
    g.swap(g_new);
  }
  return best;
}

// Dense scan of F over the feasibility band at the given resolution, then
// golden-section refinement of the winning cell (F is strictly convex, so
// the refined bracket keeps the minimizer).  Returns a point within
// resolution / 10 of the true minimizer -- in practice much closer.
template <typename Scalar>
Scalar grid_prox_oracle(const ProxQuery<Scalar>& q, Scalar resolution) {
  detail::check_query(q, "grid_prox_oracle");
  detail::require(std::isfinite(resolution) && resolution > Scalar(0),
                  "grid_prox_oracle: resolution must be finite and positive");
  const Scalar lo = q.x - q.p.a * q.t;
  const Scalar hi = q.x + q.p.b * q.t;
  const Scalar width = hi - lo;
  const auto f = [&](Scalar u) { return objective_f(u, q); };

  const Eigen::Index cells =
      std::max<Eigen::Index>(2, static_cast<Eigen::Index>(std::ceil(width / resolution)));
  Eigen::Index best_j = 0;
  Scalar best_f = infinity<Scalar>();
  for (Eigen::Index j = 0; j <= cells; ++j) {
    const Scalar u = lo + width * Scalar(j) / Scalar(cells);
    const Scalar fj = f(u);
    if (fj < best_f) {
      best_f = fj;
      best_j = j;
    }
  }
  Scalar gl = std::max(lo, lo + width * Scalar(best_j - 1) / Scalar(cells));
  Scalar gr = std::min(hi, lo + width * Scalar(best_j + 1) / Scalar(cells));

  const Scalar invphi = (std::sqrt(Scalar(5)) - 1) / 2;
  const Scalar stop = std::min(resolution / 20,
                               Scalar(1e-9) * (Scalar(1) + std::max(std::abs(lo), std::abs(hi))));
  Scalar c = gr - invphi * (gr - gl);
  Scalar d = gl + invphi * (gr - gl);
  Scalar fc = f(c);
  Scalar fd = f(d);
  for (int it = 0; it < 200 && (gr - gl) > stop; ++it) {
    if (fc < fd) {
      gr = d;
      d = c;
      fd = fc;
      c = gr - invphi * (gr - gl);
      fc = f(c);
    } else {
      gl = c;
      c = d;
      fc = fd;
      d = gl + invphi * (gr - gl);
      fd = f(d);
    }
  }
  return (gl + gr) / 2;
}

template <typename Scalar>
using ValueFn = std::function<Scalar(const VecX<Scalar>&, Scalar)>;

template <typename Scalar>
using SignatureFn = std::function<std::uint64_t(const VecX<Scalar>&, Scalar)>;

// Central-difference residual of the dynamic-programming equation
//
//   V_t + sum_i K_i(dV/dx_i) - |x|^2 / 2 = 0
//
// at (x, t), using step h in every direction.  Meaningful only where V is
// smooth across the whole stencil; see pde_residual_filtered.
template <typename Scalar>
Scalar pde_residual(const ValueFn<Scalar>& value, const ProblemSpec<Scalar>& spec,
                    const VecX<Scalar>& x, Scalar t, Scalar h) {
  detail::check_state(spec, x, t, "pde_residual");
  detail::require(std::isfinite(h) && h > Scalar(0) && t - h > Scalar(0),
                  "pde_residual: need 0 < h < t");
  Scalar acc = (value(x, t + h) - value(x, t - h)) / (2 * h);
  VecX<Scalar> xs = x;
  for (Eigen::Index i = 0; i < spec.dim(); ++i) {
    xs[i] = x[i] + h;
    const Scalar vp = value(xs, t);
    xs[i] = x[i] - h;
    const Scalar vm = value(xs, t);
    xs[i] = x[i];
    acc += hamiltonian_k((vp - vm) / (2 * h), spec.bounds(i));
  }
  return std::abs(acc - x.squaredNorm() / 2);
}

// Same residual, but only when the solution signature (an opaque per-point
// tag, e.g. packed per-axis proximal candidate tags) is constant across the
// whole stencil; gradient kinks make the raw central difference meaningless,
// and a signature change is how a kink inside the stencil is detected.
template <typename Scalar>
std::optional<Scalar> pde_residual_filtered(const ValueFn<Scalar>& value,
                                            const SignatureFn<Scalar>& signature,
                                            const ProblemSpec<Scalar>& spec, const VecX<Scalar>& x,
                                            Scalar t, Scalar h) {
  detail::check_state(spec, x, t, "pde_residual_filtered");
  detail::require(std::isfinite(h) && h > Scalar(0) && t - h > Scalar(0),
                  "pde_residual_filtered: need 0 < h < t");
  const std::uint64_t tag = signature(x, t);
  if (signature(x, t + h) != tag || signature(x, t - h) != tag) return std::nullopt;
  VecX<Scalar> xs = x;
  for (Eigen::Index i = 0; i < spec.dim(); ++i) {
    xs[i] = x[i] + h;
    const std::uint64_t tp = signature(xs, t);
    xs[i] = x[i] - h;
    const std::uint64_t tm = signature(xs, t);
    xs[i] = x[i];
    if (tp != tag || tm != tag) return std::nullopt;
  }
  return pde_residual(value, spec, x, t, h);
}

struct NdBruteForceOptions {
  int steps = 600;
  int restarts = 2;    // random restarts beyond the zero-control start
  int max_iters = 1200;
  int patience = 80;
  std::uint64_t seed = 0x5eed;
};

// Discretized n-dimensional problem in canonical coordinates: K * n controls
// A(j, i) in [-b_i, a_i], path nodes built backward from the fixed endpoint
// y, objective = exact path integral + phi at the free starting node.  Box
// projection is a plain clamp; the endpoint constraint is built into the
// parametrization.  Returns the best feasible cost over all starts, a true
// upper bound on the value.  Intended for small n (<= 3).
template <typename Scalar>
Scalar brute_force_value_nd(const ProblemSpec<Scalar>& spec,
                            const std::function<Scalar(const VecX<Scalar>&)>& phi,
                            const VecX<Scalar>& y, Scalar t, const NdBruteForceOptions& opt = {}) {
  detail::check_state(spec, y, t, "brute_force_value_nd");
  detail::require(static_cast<bool>(phi), "brute_force_value_nd: phi is required");
  detail::require(opt.steps >= 1 && opt.restarts >= 0 && opt.max_iters >= 1,
                  "brute_force_value_nd: invalid options");
  if (t <= Scalar(0)) return phi(y);

  const Eigen::Index n = spec.dim();
  const Eigen::Index k = opt.steps;
  const Scalar delta = t / Scalar(k);

  MatX<Scalar> nodes(k + 1, n);
  const auto eval = [&](const MatX<Scalar>& a) {
    nodes.row(k) = y.transpose();
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      nodes.row(j) = nodes.row(j + 1) - delta * a.row(j);
    }
    Scalar cost = Scalar(0);
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar p0 = nodes(j, i);
        const Scalar p1 = nodes(j + 1, i);
        cost += p0 * p0 + p0 * p1 + p1 * p1;
      }
    }
    return cost * delta / 6 + phi(nodes.row(0).transpose());
  };
  // Gradient: with nodes depending on A through d p_j / d A(l, i) = -delta
  // for l >= j, the quadrature contributes -delta * prefix sums of the node
  // gradients, and phi contributes -delta * grad phi(p_0) to every row.
  const auto gradient = [&](MatX<Scalar>& g) {
    VecX<Scalar> p0 = nodes.row(0).transpose();
    VecX<Scalar> gphi(n);
    const Scalar fd = Scalar(1e-6) * (Scalar(1) + p0.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar keep = p0[i];
      p0[i] = keep + fd;
      const Scalar fp = phi(p0);
      p0[i] = keep - fd;
      const Scalar fm = phi(p0);
      p0[i] = keep;
      gphi[i] = (fp - fm) / (2 * fd);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar prefix = gphi[i];
      for (Eigen::Index j = 0; j < k; ++j) {
        const Scalar gj =
            (j == 0) ? delta / 6 * (2 * nodes(0, i) + nodes(1, i))
                     : delta / 6 * (nodes(j - 1, i) + 4 * nodes(j, i) + nodes(j + 1, i));
        prefix += gj;
        g(j, i) = -delta * prefix;
      }
    }
  };
  const auto project = [&](MatX<Scalar>& a) {
    for (Eigen::Index i = 0; i < n; ++i) {
      a.col(i) = a.col(i).cwiseMax(-spec.b[i]).cwiseMin(spec.a[i]);
    }
  };

  const Scalar l_bound =
      Scalar(0.5) * delta * t * t + delta * t * Scalar(10) + std::numeric_limits<Scalar>::min();
  const Scalar step0 = 1 / l_bound;
  Scalar best = infinity<Scalar>();
  MatX<Scalar> a(k, n), a_new(k, n), g(k, n), g_new(k, n);
  for (int start = 0; start <= opt.restarts; ++start) {
    if (start == 0) {
      a.setZero();
    } else {
      SplitMix64 rng(mix_seed(opt.seed, static_cast<std::uint64_t>(start)));
      for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          a(j, i) = static_cast<Scalar>(rng.uniform(-spec.b[i], spec.a[i]));
        }
      }
    }
    project(a);
    Scalar f = eval(a);
    gradient(g);
    best = std::min(best, f);
    Scalar step = step0;
    int stagnant = 0;
    Scalar run_best = f;
    for (int iter = 0; iter < opt.max_iters; ++iter) {
      a_new = a - step * g;
      project(a_new);
      const Scalar f_new = eval(a_new);
      gradient(g_new);
      if (f_new < run_best - Scalar(1e-14) * (Scalar(1) + std::abs(run_best))) {
        run_best = f_new;
        stagnant = 0;
      } else if (++stagnant > opt.patience) {
        break;
      }
      const Scalar sy = ((a_new - a).array() * (g_new - g).array()).sum();
      const Scalar ss = (a_new - a).squaredNorm();
      step = sy > Scalar(0) ? std::min(std::max(ss / sy, step0 * Scalar(1e-3)),
                                       step0 * Scalar(1e3))
                            : step0 * Scalar(1e3);
      a.swap(a_new);
      g.swap(g_new);
    }
    best = std::min(best, run_best);
  }
  return best;
}

// Transform-aware variant: optimizes in canonical coordinates against the
// wrapped cost, which equals the x-space value at x.
template <typename Scalar>
Scalar brute_force_value_nd(const AffineTransform<Scalar>& tr, const ProblemSpec<Scalar>& spec,
                            const std::function<Scalar(const VecX<Scalar>&)>& phi_x,
                            const VecX<Scalar>& x, Scalar t, const NdBruteForceOptions& opt = {}) {
  detail::require(tr.P.rows() == spec.dim(),
                  "brute_force_value_nd: transform size must match spec");
  const std::function<Scalar(const VecX<Scalar>&)> phi_wrapped =
      [&tr, &phi_x](const VecX<Scalar>& z) { return phi_x(from_canonical(tr, z)); };
  return brute_force_value_nd(spec, phi_wrapped, VecX<Scalar>(to_canonical(tr, x)), t, opt);
}

}  // namespace hjlax
