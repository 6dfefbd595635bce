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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "hjlax/minplus.hpp"
#include "hjlax/rng.hpp"
#include "test_util.hpp"

namespace {

using hjlax::AdmmConfig;
using hjlax::MinPlusCost;
using hjlax::ProblemSpec;
using hjlax::QuadraticCost;
using hjlax::SplitMix64;
using hjlax::VecX;
using hjlax::minplus_solve;
using hjlax::solve_quadratic;

using VecXd = VecX<double>;

// The three-piece demonstration cost on n axes.
MinPlusCost<double> demo_pieces(Eigen::Index n) {
  VecXd y1 = VecXd::Zero(n);
  y1[0] = -2.0;
  VecXd y2 = VecXd::Zero(n);
  y2[0] = 2.0;
  if (n > 1) y2[1] = -2.0;
  if (n > 2) y2[2] = -1.0;
  VecXd y3 = VecXd::Zero(n);
  if (n > 1) y3[1] = 2.0;
  MinPlusCost<double> cost;
  cost.pieces = {QuadraticCost<double>{1.0, y1, -0.5}, QuadraticCost<double>{1.0, y2, 0.0},
                 QuadraticCost<double>{1.0, y3, -1.0}};
  return cost;
}

TEST_SUITE("minplus") {

TEST_CASE("three-piece sample at t = 0 selects the first center") {
  const Eigen::Index n = 10;
  const ProblemSpec<double> spec = hjtest::demo_spec(n);
  const MinPlusCost<double> cost = demo_pieces(n);
  VecXd x = VecXd::Zero(n);
  x[0] = -2.0;  // the first center
  const auto res = minplus_solve(spec, cost, x, 0.0);
  CHECK(res.value == -0.5);
  CHECK(res.diagnostics.selected_piece == 0);
  REQUIRE(res.diagnostics.piece_values.size() == 3);
  CHECK(res.diagnostics.piece_values[0] == -0.5);
  CHECK(res.diagnostics.piece_values[1] == 10.5);
  CHECK(res.diagnostics.piece_values[2] == 3.0);
}

TEST_CASE("the reported value is the exact minimum of the piece values") {
  SplitMix64 rng(606);
  int failures = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(4));
    const ProblemSpec<double> spec = hjtest::random_spec(rng, n);
    MinPlusCost<double> cost;
    const int m = 2 + static_cast<int>(rng.below(3));
    for (int j = 0; j < m; ++j) {
      cost.pieces.push_back(QuadraticCost<double>{
          rng.uniform(0.3, 3.0), hjtest::random_vec(rng, n, -2.0, 2.0), rng.uniform(-1.0, 1.0)});
    }
    const VecXd x = hjtest::random_vec(rng, n, -3.0, 3.0);
    const double t = rng.uniform(0.0, 1.0);
    const auto res = minplus_solve(spec, cost, x, t);
    double manual = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      manual = std::min(
          manual, solve_quadratic(spec, std::get<QuadraticCost<double>>(cost.pieces[j]), x, t).value);
    }
    if (res.value != manual) ++failures;
    if (res.value != *std::min_element(res.diagnostics.piece_values.begin(),
                                       res.diagnostics.piece_values.end())) {
      ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("ties select the smallest index") {
  const Eigen::Index n = 2;
  const ProblemSpec<double> spec{VecXd::Constant(n, 1.0), VecXd::Constant(n, 1.0)};
  MinPlusCost<double> cost;
  cost.pieces = {QuadraticCost<double>{1.0, VecXd::Ones(n), 0.0},
                 QuadraticCost<double>{1.0, VecXd::Ones(n), 0.0}};
  const auto res = minplus_solve(spec, cost, VecXd(VecXd::Zero(n)), 0.3);
  CHECK(res.diagnostics.selected_piece == 0);
}

TEST_CASE("min of two quadratics matches a dense scan in one dimension") {
  const ProblemSpec<double> spec{VecXd::Constant(1, 2.0), VecXd::Constant(1, 1.5)};
  MinPlusCost<double> cost;
  VecXd c1(1), c2(1);
  c1 << -1.0;
  c2 << 1.5;
  cost.pieces = {QuadraticCost<double>{1.0, c1, 0.2}, QuadraticCost<double>{2.0, c2, -0.3}};
  VecXd x(1);
  x << 0.8;
  const double t = 0.6;
  const auto res = minplus_solve(spec, cost, x, t);

  // Dense scan of min_j (V(x, t; u) + Phi_j(u)) over the band at 1e-5 steps.
  const double lo = x[0] - spec.a[0] * t;
  const double hi = x[0] + spec.b[0] * t;
  double scan = std::numeric_limits<double>::infinity();
  const int cells = static_cast<int>((hi - lo) / 1e-5);
  for (int j = 0; j <= cells; ++j) {
    const double u = lo + (hi - lo) * j / cells;
    const double v1d = hjlax::value_1d(x[0], t, u, spec.bounds(0));
    VecXd uu(1);
    uu << u;
    const double phi = std::min(std::get<QuadraticCost<double>>(cost.pieces[0])(uu),
                                std::get<QuadraticCost<double>>(cost.pieces[1])(uu));
    scan = std::min(scan, v1d + phi);
  }
  CHECK(res.value <= scan + 1e-12);
  CHECK(scan - res.value <= 1e-4);
}

TEST_CASE("constant offset perturbations move the value by at most the noise") {
  SplitMix64 rng(17);
  int failures = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index n = 2;
    const ProblemSpec<double> spec = hjtest::random_spec(rng, n);
    MinPlusCost<double> cost;
    const int m = 2 + static_cast<int>(rng.below(3));
    for (int j = 0; j < m; ++j) {
      cost.pieces.push_back(QuadraticCost<double>{
          1.0, hjtest::random_vec(rng, n, -2.0, 2.0), rng.uniform(-1.0, 1.0)});
    }
    const VecXd x = hjtest::random_vec(rng, n, -3.0, 3.0);
    const double t = rng.uniform(0.1, 0.8);
    const auto base = minplus_solve(spec, cost, x, t);

    const double eps = 1e-4;
    MinPlusCost<double> noisy = cost;
    for (int j = 0; j < m; ++j) {
      std::get<QuadraticCost<double>>(noisy.pieces[j]).offset +=
          (rng.u01() < 0.5 ? -eps : eps);
    }
    const auto pert = minplus_solve(spec, noisy, x, t);
    if (std::abs(pert.value - base.value) > eps + 1e-12) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("oracle-backed pieces propagate non-convergence but still select") {
  const Eigen::Index n = 3;
  const ProblemSpec<double> spec{VecXd::Constant(n, 1.0), VecXd::Constant(n, 1.0)};
  MinPlusCost<double> cost;
  cost.pieces = {QuadraticCost<double>{1.0, VecXd::Ones(n), 0.0},
                 hjlax::sq_l1_oracle(VecXd(VecXd::Zero(n)))};
  cost.admm.tol = 1e-300;  // unreachable away from the fixed point
  cost.admm.max_iters = 3;
  VecXd x(n);
  x << 1.0, -2.0, 0.5;
  const auto res = minplus_solve(spec, cost, x, 0.5);
  CHECK(!res.diagnostics.converged);
  CHECK(res.diagnostics.selected_piece >= 0);
  REQUIRE(res.diagnostics.piece_values.size() == 2);
  CHECK(res.value == std::min(res.diagnostics.piece_values[0], res.diagnostics.piece_values[1]));
}

TEST_CASE("an empty piece list is rejected") {
  const ProblemSpec<double> spec{VecXd::Constant(2, 1.0), VecXd::Constant(2, 1.0)};
  CHECK_THROWS_AS(minplus_solve(spec, MinPlusCost<double>{}, VecXd(VecXd::Zero(2)), 0.5),
                  std::invalid_argument);
}

TEST_CASE("the cost value helper is the pointwise piece minimum") {
  const Eigen::Index n = 10;
  const MinPlusCost<double> cost = demo_pieces(n);
  VecXd v = VecXd::Zero(n);
  v[0] = -2.0;
  CHECK(cost.value(v) == -0.5);
}

}  // TEST_SUITE

}  // namespace
