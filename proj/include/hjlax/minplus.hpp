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

// Min-plus decomposition: for Phi = min_j Phi_j the value function is the
// pointwise minimum of the per-piece values,
//
//   V(x, t) = min_j V_j(x, t),
//
// so each piece is solved independently (exactly for quadratic pieces,
// via ADMM for oracle-backed ones) and the smallest value wins.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "hjlax/admm.hpp"
#include "hjlax/parallel.hpp"
#include "hjlax/separable.hpp"
#include "hjlax/types.hpp"

namespace hjlax {

// One quadratic piece (lambda / 2) |v - center|^2 + offset.
template <typename Scalar>
using QuadraticPiece = QuadraticCost<Scalar>;

template <typename Scalar>
using MinPlusPiece = std::variant<QuadraticCost<Scalar>, ProxOracle<Scalar>>;

// Phi(v) = min_j Phi_j(v) over m >= 1 pieces.  `admm` configures the solve
// of any oracle-backed piece.
template <typename Scalar>
struct MinPlusCost {
  std::vector<MinPlusPiece<Scalar>> pieces;
  AdmmConfig<Scalar> admm;

  Scalar value(const VecX<Scalar>& v) const {
    Scalar best = infinity<Scalar>();
    for (const MinPlusPiece<Scalar>& piece : pieces) {
      const Scalar val = std::holds_alternative<QuadraticCost<Scalar>>(piece)
                             ? std::get<QuadraticCost<Scalar>>(piece)(v)
                             : std::get<ProxOracle<Scalar>>(piece).value(v);
      best = std::min(best, val);
    }
    return best;
  }
};

// Solves every piece and returns the pointwise minimum value together with
// the minimizer and trajectory of the selected piece.  The reported value is
// exactly min_j value_j; ties within 1e-12 (1 + |min|) select the smallest
// index, which also resolves exact ties deterministically.  Non-convergence
// of any ADMM-backed piece only clears diagnostics.converged -- selection
// still happens.  Pieces fan out across threads only when at least one piece
// needs ADMM; exact quadratic pieces are too cheap to be worth the spawn.
template <typename Scalar, typename Derived>
SolveResult<Scalar> minplus_solve(const ProblemSpec<Scalar>& spec, const MinPlusCost<Scalar>& cost,
                                  const Eigen::MatrixBase<Derived>& x_in, Scalar t,
                                  unsigned threads = 0) {
  using std::abs;
  const VecX<Scalar> x = x_in;
  detail::check_state(spec, x, t, "minplus_solve");
  detail::require(!cost.pieces.empty(), "minplus_solve: at least one piece is required");

  const std::size_t m = cost.pieces.size();
  std::vector<SolveResult<Scalar>> sub(m);
  bool any_admm = false;
  for (const MinPlusPiece<Scalar>& piece : cost.pieces) {
    any_admm = any_admm || std::holds_alternative<ProxOracle<Scalar>>(piece);
  }
  AdmmConfig<Scalar> piece_cfg = cost.admm;
  const bool fan_out = any_admm && m > 1;
  if (fan_out) piece_cfg.threads = 1;  // thread budget goes to the piece fan-out
  const auto solve_piece = [&](Eigen::Index j) {
    const MinPlusPiece<Scalar>& piece = cost.pieces[static_cast<std::size_t>(j)];
    if (std::holds_alternative<QuadraticCost<Scalar>>(piece)) {
      sub[static_cast<std::size_t>(j)] =
          solve_quadratic(spec, std::get<QuadraticCost<Scalar>>(piece), x, t,
                          fan_out ? 1U : threads);
    } else {
      sub[static_cast<std::size_t>(j)] =
          admm_solve(spec, std::get<ProxOracle<Scalar>>(piece), x, t, piece_cfg);
    }
  };
  if (fan_out) {
    parallel_for(static_cast<Eigen::Index>(m), threads, 0, solve_piece);
  } else {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) solve_piece(j);
  }

  Scalar vmin = sub[0].value;
  for (std::size_t j = 1; j < m; ++j) vmin = std::min(vmin, sub[j].value);
  const Scalar tie_tol = Scalar(1e-12) * (Scalar(1) + abs(vmin));
  std::size_t selected = 0;
  while (selected < m && !(sub[selected].value <= vmin + tie_tol)) ++selected;

  SolveResult<Scalar> res = sub[selected];
  res.value = vmin;
  res.diagnostics.selected_piece = static_cast<int>(selected);
  res.diagnostics.piece_values.resize(m);
  bool all_converged = true;
  for (std::size_t j = 0; j < m; ++j) {
    res.diagnostics.piece_values[j] = sub[j].value;
    all_converged = all_converged && sub[j].diagnostics.converged;
  }
  res.diagnostics.converged = all_converged;
  res.diagnostics.iterations = sub[selected].diagnostics.iterations;
  return res;
}

}  // namespace hjlax
