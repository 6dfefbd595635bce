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

// Affine change of variables for problems whose running cost is the
// quadratic form (1/2)(x - v0)' M^{-1} (x - v0) with M = P P' positive
// definite, and whose dynamics are box-constrained in the canonical frame.
// Writing y = P' (x - v0) reduces the problem to the axis-separable one of
// separable.hpp; values transfer unchanged and paths map back through
// x = (P')^{-1} z + v0.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hjlax/admm.hpp"
#include "hjlax/minplus.hpp"
#include "hjlax/separable.hpp"
#include "hjlax/types.hpp"

namespace hjlax {

template <typename Scalar>
struct AffineTransform {
  MatX<Scalar> P;
  MatX<Scalar> P_inv_T;  // (P')^{-1}
  VecX<Scalar> v0;
  MatX<Scalar> M;        // P P'
};

// Builds and validates the transform.  Rejects non-square or non-finite
// input, a reciprocal condition estimate below 1e-12 (condition number
// above 1e12), an inverse whose residual max-norm exceeds 1e-10, or an M
// that fails the positive-definiteness check (a Cholesky factorization,
// which succeeds exactly when every leading minor is positive).
template <typename Scalar>
AffineTransform<Scalar> make_transform(const MatX<Scalar>& P, const VecX<Scalar>& v0) {
  detail::require(P.rows() > 0 && P.rows() == P.cols(), "make_transform: P must be square");
  detail::require(v0.size() == P.rows(), "make_transform: v0 size must match P");
  detail::require(P.allFinite() && v0.allFinite(), "make_transform: entries must be finite");

  Eigen::PartialPivLU<MatX<Scalar>> lu(P);
  const Scalar rcond = lu.rcond();
  detail::require(std::isfinite(rcond) && rcond > Scalar(1e-12),
                  "make_transform: P is singular or its condition estimate exceeds 1e12");
  const MatX<Scalar> P_inv = lu.inverse();
  const MatX<Scalar> identity = MatX<Scalar>::Identity(P.rows(), P.cols());
  detail::require(((P * P_inv) - identity).cwiseAbs().maxCoeff() <= Scalar(1e-10),
                  "make_transform: inverse verification failed");

  AffineTransform<Scalar> tr;
  tr.P = P;
  tr.P_inv_T = P_inv.transpose();
  tr.v0 = v0;
  tr.M = P * P.transpose();
  const Scalar scale = tr.M.cwiseAbs().maxCoeff();
  detail::require((tr.M - tr.M.transpose()).cwiseAbs().maxCoeff() <=
                      Scalar(1e-12) * (Scalar(1) + scale),
                  "make_transform: M = P P' is not symmetric");
  Eigen::LLT<MatX<Scalar>> llt(tr.M);
  detail::require(llt.info() == Eigen::Success, "make_transform: M = P P' is not positive definite");
  return tr;
}

template <typename Scalar, typename Derived>
VecX<Scalar> to_canonical(const AffineTransform<Scalar>& tr, const Eigen::MatrixBase<Derived>& x) {
  return tr.P.transpose() * (x - tr.v0);
}

template <typename Scalar, typename Derived>
VecX<Scalar> from_canonical(const AffineTransform<Scalar>& tr,
                            const Eigen::MatrixBase<Derived>& z) {
  return tr.P_inv_T * z + tr.v0;
}

// Wraps an x-space cost into canonical coordinates:
// wrapped(z) = phi((P')^{-1} z + v0).
template <typename Scalar, typename Phi>
auto wrap_cost(const AffineTransform<Scalar>& tr, Phi phi) {
  return [tr, phi = std::move(phi)](const VecX<Scalar>& z) { return phi(from_canonical(tr, z)); };
}

// Canonical-frame proximal oracle for an x-space quadratic cost.  In
// canonical coordinates the cost is (lambda / 2) |Q z - (center - v0)|^2 +
// offset with Q = (P')^{-1}, so the prox solves the SPD system
// (lambda Q'Q + weight I) v = lambda Q'(center - v0) + weight z.
template <typename Scalar>
ProxOracle<Scalar> transformed_quadratic_oracle(const AffineTransform<Scalar>& tr,
                                                const QuadraticCost<Scalar>& cost) {
  detail::require(cost.center.size() == tr.P.rows(),
                  "transformed_quadratic_oracle: center size must match the transform");
  detail::require(std::isfinite(cost.lambda) && cost.lambda > Scalar(0),
                  "transformed_quadratic_oracle: lambda must be finite and positive");
  const MatX<Scalar> hessian = cost.lambda * (tr.P_inv_T.transpose() * tr.P_inv_T);
  const VecX<Scalar> linear = cost.lambda * (tr.P_inv_T.transpose() * (cost.center - tr.v0));
  auto value = wrap_cost(tr, cost);
  return ProxOracle<Scalar>{
      [hessian, linear](const VecX<Scalar>& z, Scalar weight) {
        MatX<Scalar> shifted = hessian;
        shifted.diagonal().array() += weight;
        return VecX<Scalar>(Eigen::LLT<MatX<Scalar>>(shifted).solve(linear + weight * z));
      },
      [value](const VecX<Scalar>& v) { return value(v); }};
}

// Result of a solve in x-space coordinates.  `canonical` holds the full
// axis-separable sub-result (per-axis trajectories live in the canonical
// frame); `start` is the x-space start chi(0) = (P')^{-1} u* + v0 of the
// optimal path, whose endpoint chi(t) is the query point x.
template <typename Scalar>
struct GeneralSolveResult {
  Scalar value = Scalar(0);
  VecX<Scalar> minimizer;  // canonical control u*
  VecX<Scalar> start;      // x-space path start
  SolveResult<Scalar> canonical;
};

// Evaluates the x-space path at time s from the canonical per-axis paths.
template <typename Scalar>
VecX<Scalar> trajectory_point(const AffineTransform<Scalar>& tr,
                              const std::vector<Trajectory1D<Scalar>>& trajectory, Scalar s) {
  VecX<Scalar> z(static_cast<Eigen::Index>(trajectory.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z[i] = trajectory_eval(trajectory[static_cast<std::size_t>(i)], s);
  }
  return from_canonical(tr, z);
}

namespace detail {

template <typename Scalar>
bool is_diagonal(const MatX<Scalar>& P) {
  for (Eigen::Index r = 0; r < P.rows(); ++r) {
    for (Eigen::Index c = 0; c < P.cols(); ++c) {
      if (r != c && P(r, c) != Scalar(0)) return false;
    }
  }
  return true;
}

template <typename Scalar>
GeneralSolveResult<Scalar> lift_result(const AffineTransform<Scalar>& tr,
                                       SolveResult<Scalar> sub) {
  GeneralSolveResult<Scalar> res;
  res.value = sub.value;
  res.minimizer = sub.minimizer;
  res.start = from_canonical(tr, sub.minimizer);
  res.canonical = std::move(sub);
  return res;
}

}  // namespace detail

// Exact solve for an x-space quadratic cost.  Requires diagonal P: then the
// canonical cost stays axis-separable with per-axis weight lambda / P_ii^2
// and center P_ii (center_i - v0_i), and each axis is one exact scalar
// proximal step.  For general P use the ADMM overload below with
// transformed_quadratic_oracle.
template <typename Scalar, typename Derived>
GeneralSolveResult<Scalar> solve_general(const AffineTransform<Scalar>& tr,
                                         const ProblemSpec<Scalar>& spec,
                                         const QuadraticCost<Scalar>& cost,
                                         const Eigen::MatrixBase<Derived>& x_in, Scalar t,
                                         unsigned threads = 0) {
  const VecX<Scalar> x = x_in;
  detail::require(tr.P.rows() == spec.dim(), "solve_general: transform size must match spec");
  if (!detail::is_diagonal(tr.P)) {
    throw std::invalid_argument(
        "solve_general: the exact quadratic path needs diagonal P; build a prox oracle with "
        "transformed_quadratic_oracle and use the ADMM overload instead");
  }
  detail::check_state(spec, x, t, "solve_general");
  detail::require(cost.center.size() == spec.dim() && cost.center.allFinite() &&
                      std::isfinite(cost.lambda) && cost.lambda > Scalar(0) &&
                      std::isfinite(cost.offset),
                  "solve_general: cost must be finite with lambda > 0");
  const VecX<Scalar> y = to_canonical(tr, x);
  auto phi_canonical = wrap_cost(tr, cost);
  const Eigen::Index n = spec.dim();
  SolveResult<Scalar> sub;
  if (t <= Scalar(0)) {
    sub = detail::instant_result(spec, phi_canonical, y);
  } else {
    sub.minimizer.resize(n);
    sub.trajectory.resize(static_cast<std::size_t>(n));
    parallel_for(n, threads, detail::kAxisSerialCutoff, [&](Eigen::Index i) {
      const Scalar pii = tr.P(i, i);
      const ProxQuery<Scalar> q{y[i], t, spec.bounds(i), cost.lambda / (pii * pii),
                                pii * (cost.center[i] - tr.v0[i])};
      const ProxResult<Scalar> pr = prox_value_1d(q);
      sub.minimizer[i] = pr.u_star;
      sub.trajectory[static_cast<std::size_t>(i)] =
          trajectory_1d(y[i], t, pr.u_star, spec.bounds(i));
    });
    sub.value = assemble_value(sub.minimizer, y, t, spec, phi_canonical);
  }
  return detail::lift_result(tr, std::move(sub));
}

// ADMM solve for an arbitrary canonical-frame prox oracle (e.g. from
// transformed_quadratic_oracle, or sq_l1_oracle when P is the identity).
template <typename Scalar, typename Derived>
GeneralSolveResult<Scalar> solve_general(const AffineTransform<Scalar>& tr,
                                         const ProblemSpec<Scalar>& spec,
                                         const ProxOracle<Scalar>& phi_canonical,
                                         const Eigen::MatrixBase<Derived>& x_in, Scalar t,
                                         const AdmmConfig<Scalar>& cfg = {}) {
  const VecX<Scalar> x = x_in;
  detail::require(tr.P.rows() == spec.dim(), "solve_general: transform size must match spec");
  detail::check_state(spec, x, t, "solve_general");
  return detail::lift_result(tr, admm_solve(spec, phi_canonical, to_canonical(tr, x), t, cfg));
}

// Min-plus solve with canonical-frame pieces.
template <typename Scalar, typename Derived>
GeneralSolveResult<Scalar> solve_general(const AffineTransform<Scalar>& tr,
                                         const ProblemSpec<Scalar>& spec,
                                         const MinPlusCost<Scalar>& cost_canonical,
                                         const Eigen::MatrixBase<Derived>& x_in, Scalar t,
                                         unsigned threads = 0) {
  const VecX<Scalar> x = x_in;
  detail::require(tr.P.rows() == spec.dim(), "solve_general: transform size must match spec");
  detail::check_state(spec, x, t, "solve_general");
  return detail::lift_result(tr,
                             minplus_solve(spec, cost_canonical, to_canonical(tr, x), t, threads));
}

}  // namespace hjlax
