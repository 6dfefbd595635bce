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

// Exact scalar proximal step for the 1-D value function:
//
//   minimize  F(u) = V(x, t; u) + (lambda / 2) (u - y)^2
//
// over the feasibility band [x - a t, x + b t].  F is strictly convex and C^1
// on the band (V itself is C^2 there), so the minimizer is either one of at
// most four interior stationary points -- one per smooth branch of V, each a
// root of a quadratic -- or a band endpoint.  All candidates are evaluated
// and the best kept, which costs O(1) per query.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hjlax/core1d.hpp"
#include "hjlax/types.hpp"

namespace hjlax {

// One proximal query.  lambda > 0 is the quadratic weight, y the center.
template <typename Scalar>
struct ProxQuery {
  Scalar x;
  Scalar t;
  Params1D<Scalar> p;
  Scalar lambda;
  Scalar y;
};

// Which candidate produced the minimizer (diagnostic; useful for detecting
// branch switches, e.g. when filtering finite-difference stencils).
enum class ProxCandidate {
  kStationaryTurnPos,  // interior root on the no-rest branch, u >= 0
  kStationaryRestPos,  // interior root on the resting branches, u >= 0
  kStationaryTurnNeg,  // mirrored no-rest root, u <= 0
  kStationaryRestNeg,  // mirrored resting root, u <= 0
  kLowerBound,         // u = x - a t
  kUpperBound,         // u = x + b t
};

template <typename Scalar>
struct ProxResult {
  Scalar u_star;
  Scalar f_star;
  ProxCandidate candidate;
};

// The four interior stationary points; a root is absent when its quadratic
// has negative discriminant.
template <typename Scalar>
struct StationaryRoots {
  std::optional<Scalar> turn_pos;
  std::optional<Scalar> rest_pos;
  std::optional<Scalar> turn_neg;
  std::optional<Scalar> rest_neg;
};

namespace detail {

template <typename Scalar>
inline void check_query(const ProxQuery<Scalar>& q, const char* fn) {
  check_point(q.x, q.t, Scalar(0), q.p, fn);
  if (!(q.t > Scalar(0))) {
    throw std::invalid_argument(std::string(fn) + ": t must be positive");
  }
  if (!all_finite<Scalar>({q.lambda, q.y}) || !(q.lambda > Scalar(0))) {
    throw std::invalid_argument(std::string(fn) + ": lambda must be finite positive, y finite");
  }
}

// Root of F' = 0 on the no-rest branch for u >= 0.  Eliminating the turning
// point leaves the monic quadratic u^2 + 2 A u - C = 0 with
//
//   A = (lambda (a+b)^2 - a (x - a t)) / (2 a + b),
//   C = (b (x - a t)^2 + 2 lambda (a+b)^2 y) / (2 a + b),
//
// whose relevant (larger) root is -A + sqrt(A^2 + C).  For A >= 0 that
// difference is formed as C / (A + sqrt(A^2 + C)) to avoid cancellation.
template <typename Scalar>
std::optional<Scalar> turn_root(Scalar x, Scalar t, Scalar a, Scalar b, Scalar lambda, Scalar y) {
  const Scalar q = a + b;
  const Scalar edge = x - a * t;
  const Scalar denom = 2 * a + b;
  const Scalar A = (lambda * q * q - a * edge) / denom;
  const Scalar C = (b * edge * edge + 2 * lambda * q * q * y) / denom;
  const Scalar disc = A * A + C;
  if (disc < Scalar(0)) return std::nullopt;
  const Scalar root = std::sqrt(disc);
  if (A >= Scalar(0)) {
    const Scalar sum = A + root;
    return sum == Scalar(0) ? Scalar(0) : C / sum;
  }
  return -A + root;
}

// Root of F' = 0 on the resting branches for u >= 0: the larger root of
// u^2 + 2 lambda b u - 2 lambda b y = 0, formed cancellation-free.
template <typename Scalar>
std::optional<Scalar> rest_root(Scalar b, Scalar lambda, Scalar y) {
  const Scalar B = lambda * b;
  const Scalar K = 2 * B * y;
  const Scalar disc = B * B + K;
  if (disc < Scalar(0)) return std::nullopt;
  return K / (B + std::sqrt(disc));
}

}  // namespace detail

// F itself; +infinity off the band.
template <typename Scalar>
Scalar objective_f(Scalar u, const ProxQuery<Scalar>& q) {
  const Scalar diff = u - q.y;
  return value_1d(q.x, q.t, u, q.p) + q.lambda / 2 * diff * diff;
}

// All interior stationary points.  The u <= 0 roots are obtained from the
// u >= 0 formulas through the exact mirror identity
// root'(x, t, a, b, y) = -root(-x, t, b, a, -y), evaluated literally so that
// prox symmetry holds bit for bit.
template <typename Scalar>
StationaryRoots<Scalar> candidate_roots(const ProxQuery<Scalar>& q) {
  detail::check_query(q, "candidate_roots");
  StationaryRoots<Scalar> roots;
  roots.turn_pos = detail::turn_root(q.x, q.t, q.p.a, q.p.b, q.lambda, q.y);
  roots.rest_pos = detail::rest_root(q.p.b, q.lambda, q.y);
  if (const auto m = detail::turn_root(-q.x, q.t, q.p.b, q.p.a, q.lambda, -q.y)) {
    roots.turn_neg = -*m;
  }
  if (const auto m = detail::rest_root(q.p.a, q.lambda, -q.y)) {
    roots.rest_neg = -*m;
  }
  return roots;
}

// Exact proximal step.  Each stationary root is admitted only when it lies on
// its own branch (membership tested with a small tolerance so roots sitting
// on a crease are kept -- F is C^1, so either neighbour branch evaluates the
// same point) and inside the band, then clamped onto the band.  Both band
// endpoints are always candidates.  Among the admitted candidates the one
// with the smallest F wins; exact F ties prefer the smaller |u|, and the
// fixed evaluation order makes the result deterministic.
template <typename Scalar>
ProxResult<Scalar> prox_value_1d(const ProxQuery<Scalar>& q) {
  using std::abs;
  detail::check_query(q, "prox_value_1d");
  const Scalar a = q.p.a;
  const Scalar b = q.p.b;
  const Scalar x = q.x;
  const Scalar t = q.t;
  const Scalar lo = x - a * t;
  const Scalar hi = x + b * t;
  const Scalar rtol = Scalar(1e-9) * (Scalar(1) + a * t + b * t);
  const StationaryRoots<Scalar> roots = candidate_roots(q);

  struct Entry {
    Scalar u;
    ProxCandidate tag;
  };
  Entry entries[6];
  int m = 0;
  const auto admit = [&](const std::optional<Scalar>& u, bool on_branch, ProxCandidate tag) {
    if (!u || !on_branch) return;
    if (*u < lo - rtol || *u > hi + rtol) return;
    entries[m++] = {std::min(std::max(*u, lo), hi), tag};
  };
  // Branch membership for u >= 0: the no-rest regime is a u + b x - a b t >= 0,
  // the resting regimes its complement; mirrored for u <= 0.
  if (roots.turn_pos) {
    const Scalar u = *roots.turn_pos;
    admit(roots.turn_pos, u >= -rtol && a * u + b * x - a * b * t >= -a * rtol,
          ProxCandidate::kStationaryTurnPos);
  }
  if (roots.rest_pos) {
    const Scalar u = *roots.rest_pos;
    admit(roots.rest_pos, u >= -rtol && a * u + b * x - a * b * t <= a * rtol,
          ProxCandidate::kStationaryRestPos);
  }
  if (roots.turn_neg) {
    const Scalar u = *roots.turn_neg;
    admit(roots.turn_neg, u <= rtol && b * (-u) + a * (-x) - a * b * t >= -b * rtol,
          ProxCandidate::kStationaryTurnNeg);
  }
  if (roots.rest_neg) {
    const Scalar u = *roots.rest_neg;
    admit(roots.rest_neg, u <= rtol && b * (-u) + a * (-x) - a * b * t <= b * rtol,
          ProxCandidate::kStationaryRestNeg);
  }
  entries[m++] = {lo, ProxCandidate::kLowerBound};
  entries[m++] = {hi, ProxCandidate::kUpperBound};

  ProxResult<Scalar> best{Scalar(0), infinity<Scalar>(), ProxCandidate::kLowerBound};
  bool first = true;
  for (int i = 0; i < m; ++i) {
    const Scalar f = objective_f(entries[i].u, q);
    if (first || f < best.f_star ||
        (f == best.f_star && abs(entries[i].u) < abs(best.u_star))) {
      best = ProxResult<Scalar>{entries[i].u, f, entries[i].tag};
      first = false;
    }
  }
  return best;
}

}  // namespace hjlax
