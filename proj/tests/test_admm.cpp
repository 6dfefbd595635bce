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
#include "hjlax/admm.hpp"
#include "hjlax/rng.hpp"
#include "test_util.hpp"

namespace {

using hjlax::AdmmConfig;
using hjlax::ProblemSpec;
using hjlax::ProxOracle;
using hjlax::QuadraticCost;
using hjlax::SplitMix64;
using hjlax::VecX;
using hjlax::admm_solve;
using hjlax::prox_quadratic;
using hjlax::prox_sq_l1;
using hjlax::quadratic_oracle;
using hjlax::solve_quadratic;
using hjlax::sq_l1_oracle;

using VecXd = VecX<double>;

TEST_SUITE("admm") {

TEST_CASE("prox_quadratic solves its optimality condition") {
  SplitMix64 rng(11);
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 4;
    const QuadraticCost<double> cost{rng.uniform(0.1, 5.0), hjtest::random_vec(rng, n, -2.0, 2.0),
                                     0.0};
    const VecXd z = hjtest::random_vec(rng, n, -3.0, 3.0);
    const double w = rng.uniform(0.1, 5.0);
    const VecXd v = prox_quadratic(z, w, cost);
    // Gradient: lambda (v - center) + w (v - z) = 0.
    const VecXd g = cost.lambda * (v - cost.center) + w * (v - z);
    if (g.cwiseAbs().maxCoeff() > 1e-12 * (1.0 + z.cwiseAbs().maxCoeff())) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("prox_sq_l1 reproduces the pinned samples") {
  VecXd z2(2);
  z2 << 3.0, 1.0;
  const VecXd r2 = prox_sq_l1(z2, 1.0, VecXd(VecXd::Zero(2)));
  CHECK(r2[0] == 1.5);  // threshold theta = 1.5
  CHECK(r2[1] == 0.0);

  VecXd z1(1);
  z1 << 2.0;
  const VecXd r1 = prox_sq_l1(z1, 1.0, VecXd(VecXd::Zero(1)));
  CHECK(r1[0] == 1.0);

  // z at the center is a fixed point.
  VecXd c(3);
  c << -1.0, 0.5, 2.0;
  CHECK(prox_sq_l1(c, 2.0, c) == c);
}

TEST_CASE("prox_sq_l1 is optimal against random probes") {
  SplitMix64 rng(7777);
  const auto objective = [](const VecXd& v, const VecXd& z, double w, const VecXd& c) {
    const double l1 = (v - c).lpNorm<1>();
    return 0.5 * l1 * l1 + 0.5 * w * (v - z).squaredNorm();
  };
  int failures = 0;
  for (int i = 0; i < 300; ++i) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(6));
    const VecXd z = hjtest::random_vec(rng, n, -3.0, 3.0);
    const VecXd c = hjtest::random_vec(rng, n, -1.0, 1.0);
    const double w = rng.uniform(0.1, 5.0);
    const VecXd v = prox_sq_l1(z, w, c);
    const double fv = objective(v, z, w, c);
    for (int j = 0; j < 300; ++j) {
      VecXd probe = v;
      for (Eigen::Index k = 0; k < n; ++k) probe[k] += rng.uniform(-0.5, 0.5);
      if (fv > objective(probe, z, w, c) + 1e-10) {
        ++failures;
        break;
      }
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("admm with a quadratic cost matches the exact solver") {
  SplitMix64 rng(31415);
  for (int rep = 0; rep < 12; ++rep) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(8));
    const ProblemSpec<double> spec = hjtest::random_spec(rng, n);
    const QuadraticCost<double> cost{rng.uniform(0.3, 3.0), hjtest::random_vec(rng, n, -2.0, 2.0),
                                     rng.uniform(-0.5, 0.5)};
    const VecXd x = hjtest::random_vec(rng, n, -3.0, 3.0);
    const double t = rng.uniform(0.1, 1.0);
    const auto exact = solve_quadratic(spec, cost, x, t);
    const auto approx = admm_solve(spec, quadratic_oracle(cost), x, t, AdmmConfig<double>{});
    REQUIRE(approx.diagnostics.converged);
    CHECK(approx.value == doctest::Approx(exact.value).epsilon(1e-6));
    CHECK((approx.minimizer - exact.minimizer).cwiseAbs().maxCoeff() <= 1e-3);
  }
}

TEST_CASE("centered quadratic at the origin converges to zero immediately") {
  const Eigen::Index n = 10;
  const ProblemSpec<double> spec{VecXd::Constant(n, 1.0), VecXd::Constant(n, 1.0)};
  const QuadraticCost<double> cost{1.0, VecXd::Zero(n), 0.0};
  const auto res = admm_solve(spec, quadratic_oracle(cost), VecXd::Zero(n), 0.5);
  CHECK(res.value == 0.0);
  CHECK(res.minimizer == VecXd::Zero(n));
  CHECK(res.diagnostics.converged);
  CHECK(res.diagnostics.iterations == 1);
}

TEST_CASE("iteration budget exhaustion reports rather than throws") {
  const Eigen::Index n = 4;
  const ProblemSpec<double> spec{VecXd::Constant(n, 1.0), VecXd::Constant(n, 1.0)};
  AdmmConfig<double> cfg;
  cfg.tol = 1e-300;
  cfg.max_iters = 5;
  const auto res =
      admm_solve(spec, sq_l1_oracle(VecXd(VecXd::Ones(n))), VecXd(VecXd::Zero(n)), 0.5, cfg);
  CHECK(!res.diagnostics.converged);
  CHECK(res.diagnostics.iterations == 5);
  CHECK(std::isfinite(res.value));
}

TEST_CASE("degenerate horizon returns the initial cost") {
  const Eigen::Index n = 3;
  const ProblemSpec<double> spec{VecXd::Constant(n, 1.0), VecXd::Constant(n, 1.0)};
  VecXd x(n);
  x << 1.0, -2.0, 0.5;
  const auto res = admm_solve(spec, sq_l1_oracle(VecXd(VecXd::Zero(n))), x, 0.0);
  const double l1 = x.lpNorm<1>();
  CHECK(res.value == 0.5 * l1 * l1);
  CHECK(res.minimizer == x);
}

TEST_CASE("custom warm starts are validated and honored") {
  const Eigen::Index n = 3;
  const ProblemSpec<double> spec{VecXd::Constant(n, 1.0), VecXd::Constant(n, 1.0)};
  const QuadraticCost<double> cost{1.0, VecXd::Zero(n), 0.0};
  AdmmConfig<double> cfg;
  cfg.d0 = VecXd::Zero(2);  // wrong size
  CHECK_THROWS_AS(admm_solve(spec, quadratic_oracle(cost), VecXd(VecXd::Zero(n)), 0.5, cfg),
                  std::invalid_argument);
  cfg.d0 = VecXd::Zero(n);
  cfg.w0 = VecXd::Zero(n);
  const auto res = admm_solve(spec, quadratic_oracle(cost), VecXd(VecXd::Zero(n)), 0.5, cfg);
  CHECK(res.diagnostics.converged);
}

TEST_CASE("squared-l1 solve stays near the quadratic solve on one axis") {
  // In one dimension (1/2)|v - c|_1^2 equals (1/2)(v - c)^2, so the two
  // solvers must agree.
  const ProblemSpec<double> spec{VecXd::Constant(1, 2.0), VecXd::Constant(1, 3.0)};
  VecXd x(1);
  x << 1.7;
  VecXd center(1);
  center << 1.0;
  AdmmConfig<double> cfg;
  cfg.tol = 1e-14;
  const auto admm = admm_solve(spec, sq_l1_oracle(center), x, 0.4, cfg);
  const auto exact = solve_quadratic(spec, QuadraticCost<double>{1.0, center, 0.0}, x, 0.4);
  REQUIRE(admm.diagnostics.converged);
  CHECK(admm.value == doctest::Approx(exact.value).epsilon(1e-7));
}

}  // TEST_SUITE

}  // namespace
