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

// ADMM splitting for non-quadratic initial costs Phi:
//
//   minimize over (v, d):  Phi(v) + sum_i V_i(x_i, t; d_i)  s.t.  v = d.
//
// The v-update is the caller-supplied proximal of Phi, the d-update is n
// exact scalar proximal steps, and the scaled dual w tracks the constraint.
// Each iteration is O(n) plus one Phi-prox.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "hjlax/parallel.hpp"
#include "hjlax/prox1d.hpp"
#include "hjlax/separable.hpp"
#include "hjlax/types.hpp"

namespace hjlax {

// Proximal interface for an initial cost Phi:
//   prox(z, weight) = argmin_v Phi(v) + (weight / 2) |v - z|^2
//   value(v)        = Phi(v)
template <typename Scalar>
struct ProxOracle {
  std::function<VecX<Scalar>(const VecX<Scalar>&, Scalar)> prox;
  std::function<Scalar(const VecX<Scalar>&)> value;
};

template <typename Scalar>
struct AdmmConfig {
  Scalar lambda = Scalar(1);   // penalty / prox weight, > 0
  Scalar tol = Scalar(1e-8);   // threshold on all three squared update norms
  int max_iters = 10000;
  VecX<Scalar> d0;             // empty: start from x
  VecX<Scalar> w0;             // empty: start from zero
  unsigned threads = 0;        // 0: hardware default
};

template <typename Scalar>
struct AdmmState {
  VecX<Scalar> v;
  VecX<Scalar> d;
  VecX<Scalar> w;
  int iter = 0;
};

// Closed-form proximal of a quadratic cost:
//   argmin_v (lambda_c / 2)|v - center|^2 + (weight / 2)|v - z|^2.
template <typename Scalar>
VecX<Scalar> prox_quadratic(const VecX<Scalar>& z, Scalar weight, const QuadraticCost<Scalar>& cost) {
  detail::require(std::isfinite(weight) && weight > Scalar(0),
                  "prox_quadratic: weight must be finite and positive");
  return ((weight * z + cost.lambda * cost.center) / (weight + cost.lambda)).eval();
}

// Exact proximal of Phi(v) = (1/2) |v - center|_1^2 via its dual water-filling
// form: with tau = 1 / weight, sort the shifted magnitudes d_1 >= ... >= d_n,
// let theta_k = tau S_k / (1 + k tau) where S_k is the prefix sum, and pick
// the first k with d_{k+1} <= theta_k < d_k (d_{n+1} = 0); the result is the
// soft-thresholding of z - center at theta_k, shifted back.  theta_k is the
// unique fixed point theta = |soft(z - center, theta)|_1 / weight, so the
// thresholded point satisfies the subgradient optimality condition exactly.
template <typename Scalar>
VecX<Scalar> prox_sq_l1(const VecX<Scalar>& z, Scalar weight, const VecX<Scalar>& center) {
  detail::require(std::isfinite(weight) && weight > Scalar(0),
                  "prox_sq_l1: weight must be finite and positive");
  detail::require(z.size() == center.size() && z.allFinite() && center.allFinite(),
                  "prox_sq_l1: z and center must be finite and of equal size");
  const Eigen::Index n = z.size();
  const VecX<Scalar> zeta = z - center;
  const VecX<Scalar> mag = zeta.cwiseAbs();
  std::vector<Scalar> sorted(mag.data(), mag.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  if (n == 0 || !(sorted[0] > Scalar(0))) return center;

  const Scalar tau = Scalar(1) / weight;
  Scalar theta = Scalar(0);
  Scalar prefix = Scalar(0);
  for (Eigen::Index k = 1; k <= n; ++k) {
    prefix += sorted[static_cast<std::size_t>(k - 1)];
    const Scalar candidate = tau * prefix / (Scalar(1) + Scalar(k) * tau);
    const Scalar next = k < n ? sorted[static_cast<std::size_t>(k)] : Scalar(0);
    theta = candidate;  // falls back to the full-support threshold if no k matches exactly
    if (next <= candidate && candidate < sorted[static_cast<std::size_t>(k - 1)]) break;
  }
  VecX<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar shrunk = mag[i] - theta;
    out[i] = center[i] + (shrunk > Scalar(0) ? (zeta[i] > Scalar(0) ? shrunk : -shrunk) : Scalar(0));
  }
  return out;
}

// Ready-made oracles.
template <typename Scalar>
ProxOracle<Scalar> quadratic_oracle(const QuadraticCost<Scalar>& cost) {
  return ProxOracle<Scalar>{
      [cost](const VecX<Scalar>& z, Scalar weight) { return prox_quadratic(z, weight, cost); },
      [cost](const VecX<Scalar>& v) { return cost(v); }};
}

// Phi(v) = (1/2) |v - center|_1^2.
template <typename Scalar>
ProxOracle<Scalar> sq_l1_oracle(const VecX<Scalar>& center) {
  return ProxOracle<Scalar>{
      [center](const VecX<Scalar>& z, Scalar weight) { return prox_sq_l1(z, weight, center); },
      [center](const VecX<Scalar>& v) {
        const Scalar s = (v - center).template lpNorm<1>();
        return s * s / 2;
      }};
}

// ADMM solve.  Starting from d^0 (default x), w^0 (default 0) and v^0 := d^0,
// each iteration performs
//
//   v^{k+1} = prox_Phi(d^k - w^k; lambda)
//   d^{k+1}_i = prox of V_i(x_i, t; .) with weight lambda, center v^{k+1}_i + w^k_i
//   w^{k+1} = w^k + v^{k+1} - d^{k+1}
//
// and stops once |v^{k+1}-v^k|^2, |d^{k+1}-d^k|^2 and |v^{k+1}-d^{k+1}|^2 all
// drop to tol or below, or after max_iters (then diagnostics.converged is
// false; no exception).  The returned control is d^N and the value is
// assembled as sum_i V_i(x_i, t; d^N_i) + Phi(d^N).
template <typename Scalar, typename Derived>
SolveResult<Scalar> admm_solve(const ProblemSpec<Scalar>& spec, const ProxOracle<Scalar>& phi,
                               const Eigen::MatrixBase<Derived>& x_in, Scalar t,
                               const AdmmConfig<Scalar>& cfg = {}) {
  const VecX<Scalar> x = x_in;
  detail::check_state(spec, x, t, "admm_solve");
  detail::require(static_cast<bool>(phi.prox) && static_cast<bool>(phi.value),
                  "admm_solve: prox oracle must provide prox and value");
  detail::require(std::isfinite(cfg.lambda) && cfg.lambda > Scalar(0),
                  "admm_solve: lambda must be finite and positive");
  detail::require(std::isfinite(cfg.tol) && cfg.tol > Scalar(0),
                  "admm_solve: tol must be finite and positive");
  detail::require(cfg.max_iters >= 1, "admm_solve: max_iters must be at least 1");
  if (t <= Scalar(0)) return detail::instant_result(spec, phi.value, x);

  const Eigen::Index n = spec.dim();
  detail::require(cfg.d0.size() == 0 || (cfg.d0.size() == n && cfg.d0.allFinite()),
                  "admm_solve: d0 must be empty or finite of matching size");
  detail::require(cfg.w0.size() == 0 || (cfg.w0.size() == n && cfg.w0.allFinite()),
                  "admm_solve: w0 must be empty or finite of matching size");

  AdmmState<Scalar> st;
  st.d = cfg.d0.size() ? cfg.d0 : x;
  st.w = cfg.w0.size() ? cfg.w0 : VecX<Scalar>::Zero(n);
  st.v = st.d;  // reference point for the first v-update norm
  VecX<Scalar> v_new(n), d_new(n);
  bool converged = false;
  while (st.iter < cfg.max_iters) {
    v_new = phi.prox(st.d - st.w, cfg.lambda);
    detail::require(v_new.size() == n && v_new.allFinite(),
                    "admm_solve: prox oracle returned an invalid vector");
    parallel_for(n, cfg.threads, detail::kAxisSerialCutoff, [&](Eigen::Index i) {
      const ProxQuery<Scalar> q{x[i], t, spec.bounds(i), cfg.lambda, v_new[i] + st.w[i]};
      d_new[i] = prox_value_1d(q).u_star;
    });
    st.w += v_new - d_new;
    ++st.iter;
    const Scalar dv = (v_new - st.v).squaredNorm();
    const Scalar dd = (d_new - st.d).squaredNorm();
    const Scalar gap = (v_new - d_new).squaredNorm();
    st.v = v_new;
    st.d = d_new;
    if (dv <= cfg.tol && dd <= cfg.tol && gap <= cfg.tol) {
      converged = true;
      break;
    }
  }

  SolveResult<Scalar> res;
  res.minimizer = st.d;
  res.trajectory.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    res.trajectory[static_cast<std::size_t>(i)] = trajectory_1d(x[i], t, st.d[i], spec.bounds(i));
  }
  res.value = assemble_value(res.minimizer, x, t, spec, phi.value);
  res.diagnostics.iterations = st.iter;
  res.diagnostics.converged = converged;
  return res;
}

}  // namespace hjlax
