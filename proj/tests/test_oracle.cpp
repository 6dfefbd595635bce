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

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hjlax/hjlax.hpp"
#include "test_util.hpp"

namespace {

using hjlax::Params1D;
using hjlax::ProblemSpec;
using hjlax::ProxQuery;
using hjlax::QuadraticCost;
using hjlax::SplitMix64;
using hjlax::Trajectory1D;
using hjlax::VecX;
using hjlax::brute_force_value_1d;
using hjlax::brute_force_value_nd;
using hjlax::grid_prox_oracle;
using hjlax::trajectory_cost;
using hjlax::value_1d;

using VecXd = VecX<double>;

TEST_SUITE("oracle") {

TEST_CASE("trajectory_cost integrates hand-built paths exactly") {
  // Constant path: cost = c^2 T / 2.
  Trajectory1D<double> rest;
  rest.horizon = 2.0;
  rest.segments[0] = {0.0, 2.0, 3.0, 0.0};
  rest.count = 1;
  CHECK(trajectory_cost(rest) == 9.0);

  // Single climb 1 + 2s on [0, 0.5]: integral of (1 + 2s)^2 / 2 = 7/12.
  Trajectory1D<double> climb;
  climb.horizon = 0.5;
  climb.segments[0] = {0.0, 0.5, 1.0, 2.0};
  climb.count = 1;
  CHECK(trajectory_cost(climb) == doctest::Approx(7.0 / 12.0).epsilon(1e-15));

  // Down, rest, up: 1 - s on [0,1), 0 on [1,1.5), s - 1.5 on [1.5,2].
  Trajectory1D<double> zigzag;
  zigzag.horizon = 2.0;
  zigzag.segments[0] = {0.0, 1.0, 1.0, -1.0};
  zigzag.segments[1] = {1.0, 1.5, 0.0, 0.0};
  zigzag.segments[2] = {1.5, 2.0, -1.5, 1.0};
  zigzag.count = 3;
  CHECK(trajectory_cost(zigzag) == doctest::Approx(0.1875).epsilon(1e-15));
}

TEST_CASE("brute force 1d approaches zero on the trivial instance") {
  const double bf = brute_force_value_1d(0.0, 1.0, 0.0, Params1D<double>{1.0, 1.0}, 100);
  CHECK(bf >= 0.0);
  CHECK(bf <= 1e-6);
}

TEST_CASE("brute force 1d brackets the climb-only value from above") {
  const double expected = 7.0 / 12.0;
  const double bf = brute_force_value_1d(2.0, 0.5, 1.0, Params1D<double>{2.0, 1.0}, 2000);
  CHECK(bf >= expected - 1e-9);
  CHECK(bf - expected <= 1e-3);
}

TEST_CASE("brute force 1d matches the two-segment closed form") {
  const double expected = 265.0 / 588.0;  // value_1d(1, 0.5, 2; a=4, b=3)
  const double bf = brute_force_value_1d(1.0, 0.5, 2.0, Params1D<double>{4.0, 3.0}, 4000);
  CHECK(bf >= expected - 1e-9);
  CHECK(bf - expected <= 1e-3);
}

TEST_CASE("brute force 1d rejects infeasible and bad input") {
  CHECK_THROWS_AS(brute_force_value_1d(0.0, 1.0, 5.0, Params1D<double>{1.0, 1.0}, 100),
                  std::domain_error);
  CHECK_THROWS_AS(brute_force_value_1d(0.0, 1.0, 0.0, Params1D<double>{1.0, 1.0}, 0),
                  std::invalid_argument);
}

TEST_CASE("brute force 1d sandwiches the closed form on random instances") {
  SplitMix64 rng(616);
  int below = 0;
  int far = 0;
  for (int i = 0; i < 25; ++i) {
    const auto s = hjtest::random_feasible(rng);
    const double v = value_1d(s.x, s.t, s.u, s.p);
    const double bf = brute_force_value_1d(s.x, s.t, s.u, s.p, 1500);
    if (bf < v - 1e-9) ++below;
    if (bf - v > 2e-3 * (1.0 + std::abs(v))) ++far;
  }
  CHECK(below == 0);
  CHECK(far == 0);
}

TEST_CASE("grid prox oracle refines to the analytic minimizer") {
  const ProxQuery<double> q{1.0, 0.5, Params1D<double>{4.0, 3.0}, 1.0, 0.0};
  const double width = (q.p.a + q.p.b) * q.t;
  const double u = grid_prox_oracle(q, width / 2000);
  CHECK(std::abs(u - 0.0) <= 1e-6);  // exact minimizer is u = 0
  CHECK(hjlax::objective_f(0.0, q) <= hjlax::objective_f(u, q) + 1e-12);
}

TEST_CASE("pde residual is small at a smooth point of the solved field") {
  const ProblemSpec<double> spec = hjtest::demo_spec(2);
  const QuadraticCost<double> cost{1.0, VecXd::Ones(2), 0.0};
  const hjlax::ValueFn<double> value = [&](const VecXd& x, double t) {
    return hjlax::solve_quadratic(spec, cost, x, t, 1U).value;
  };
  VecXd x(2);
  x << 0.7, -1.3;
  CHECK(hjlax::pde_residual(value, spec, x, 0.3, 1e-4) <= 1e-3);
  CHECK_THROWS_AS(hjlax::pde_residual(value, spec, x, 0.3, 0.5), std::invalid_argument);
}

TEST_CASE("filtered pde residual rejects stencils that straddle a kink") {
  const ProblemSpec<double> spec = hjtest::demo_spec(1);
  const QuadraticCost<double> cost{1.0, VecXd::Ones(1), 0.0};
  const hjlax::ValueFn<double> value = [&](const VecXd& x, double t) {
    return hjlax::solve_quadratic(spec, cost, x, t, 1U).value;
  };
  int calls = 0;
  const hjlax::SignatureFn<double> flip = [&](const VecXd&, double) -> std::uint64_t {
    return static_cast<std::uint64_t>(calls++ % 2);
  };
  VecXd x(1);
  x << 0.5;
  CHECK(!hjlax::pde_residual_filtered(value, flip, spec, x, 0.3, 1e-4).has_value());
  const hjlax::SignatureFn<double> constant = [](const VecXd&, double) -> std::uint64_t {
    return 7;
  };
  const auto res = hjlax::pde_residual_filtered(value, constant, spec, x, 0.3, 1e-4);
  REQUIRE(res.has_value());
  CHECK(*res <= 1e-3);
}

TEST_CASE("brute force nd upper-bounds and approaches the exact solve") {
  SplitMix64 rng(441);
  hjlax::NdBruteForceOptions opt;
  opt.steps = 500;
  opt.restarts = 1;
  int below = 0;
  int far = 0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Index n = 2;
    const ProblemSpec<double> spec = hjtest::random_spec(rng, n, 0.5, 3.0);
    const QuadraticCost<double> cost{rng.uniform(0.5, 2.0), hjtest::random_vec(rng, n, -2.0, 2.0),
                                     rng.uniform(-0.5, 0.5)};
    const VecXd x = hjtest::random_vec(rng, n, -2.0, 2.0);
    const double t = rng.uniform(0.2, 0.8);
    const auto exact = hjlax::solve_quadratic(spec, cost, x, t, 1U);
    const std::function<double(const VecXd&)> phi = [&cost](const VecXd& v) { return cost(v); };
    const double bf = brute_force_value_nd(spec, phi, x, t, opt);
    if (bf < exact.value - 1e-9) ++below;
    if (bf - exact.value > 1e-3 * (1.0 + std::abs(exact.value))) ++far;
  }
  CHECK(below == 0);
  CHECK(far == 0);
}

TEST_CASE("brute force nd handles the degenerate horizon") {
  const ProblemSpec<double> spec = hjtest::demo_spec(2);
  const std::function<double(const VecXd&)> phi = [](const VecXd& v) { return v.squaredNorm(); };
  VecXd y(2);
  y << 1.0, -2.0;
  CHECK(brute_force_value_nd(spec, phi, y, 0.0) == y.squaredNorm());
}

}  // TEST_SUITE

}  // namespace
