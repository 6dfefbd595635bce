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
#include <vector>

#include "doctest.h"
#include "hjlax/rng.hpp"
#include "hjlax/transform.hpp"
#include "test_util.hpp"

namespace {

using hjlax::AdmmConfig;
using hjlax::AffineTransform;
using hjlax::MatX;
using hjlax::ProblemSpec;
using hjlax::QuadraticCost;
using hjlax::SplitMix64;
using hjlax::VecX;
using hjlax::from_canonical;
using hjlax::make_transform;
using hjlax::solve_general;
using hjlax::to_canonical;

using MatXd = MatX<double>;
using VecXd = VecX<double>;

MatXd rotation2(double phi) {
  MatXd r(2, 2);
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

MatXd random_well_conditioned(SplitMix64& rng) {
  const MatXd d = VecXd::LinSpaced(2, rng.uniform(0.6, 1.2), rng.uniform(1.2, 1.8)).asDiagonal();
  return rotation2(rng.uniform(0.0, 6.28)) * d * rotation2(rng.uniform(0.0, 6.28));
}

TEST_SUITE("transform") {

TEST_CASE("to_canonical on the pinned shear sample") {
  MatXd p(2, 2);
  p << 1.0, 1.0, 0.0, 1.0;
  const auto tr = make_transform(p, VecXd(VecXd::Zero(2)));
  VecXd x(2);
  x << 1.0, 2.0;
  const VecXd y = to_canonical(tr, x);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 3.0);
  CHECK((from_canonical(tr, y) - x).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("construction validates its inputs") {
  CHECK_THROWS_AS(make_transform(MatXd(MatXd::Zero(2, 3)), VecXd(VecXd::Zero(2))),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_transform(MatXd(MatXd::Identity(2, 2)), VecXd(VecXd::Zero(3))),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_transform(MatXd(MatXd::Zero(2, 2)), VecXd(VecXd::Zero(2))),
                  std::invalid_argument);
  MatXd ill = MatXd::Identity(2, 2);
  ill(1, 1) = 1e-13;  // condition estimate beyond 1e12
  CHECK_THROWS_AS(make_transform(ill, VecXd(VecXd::Zero(2))), std::invalid_argument);
  MatXd nan = MatXd::Identity(2, 2);
  nan(0, 1) = std::nan("");
  CHECK_THROWS_AS(make_transform(nan, VecXd(VecXd::Zero(2))), std::invalid_argument);
}

TEST_CASE("round trips and the quadratic form hold on random transforms") {
  SplitMix64 rng(321);
  int failures = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const MatXd p = random_well_conditioned(rng);
    const VecXd v0 = hjtest::random_vec(rng, 2, -1.0, 1.0);
    const auto tr = make_transform(p, v0);
    if ((tr.M - p * p.transpose()).cwiseAbs().maxCoeff() > 1e-14) ++failures;
    const VecXd x = hjtest::random_vec(rng, 2, -3.0, 3.0);
    const VecXd back = from_canonical(tr, VecXd(to_canonical(tr, x)));
    if ((back - x).cwiseAbs().maxCoeff() > 1e-10) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("a pure shift reduces to the canonical solver on shifted data") {
  SplitMix64 rng(99);
  const Eigen::Index n = 4;
  const ProblemSpec<double> spec = hjtest::random_spec(rng, n);
  const VecXd v0 = hjtest::random_vec(rng, n, -1.0, 1.0);
  const VecXd c = hjtest::random_vec(rng, n, -2.0, 2.0);
  const VecXd x = hjtest::random_vec(rng, n, -2.0, 2.0);
  const double t = 0.45;

  const auto tr = make_transform(MatXd(MatXd::Identity(n, n)), v0);
  const auto shifted = solve_general(tr, spec, QuadraticCost<double>{1.0, c, 0.0}, x, t);
  const auto canonical = hjlax::solve_quadratic(
      spec, QuadraticCost<double>{1.0, VecXd(c - v0), 0.0}, VecXd(x - v0), t);
  CHECK(shifted.value == doctest::Approx(canonical.value).epsilon(1e-13));
  CHECK((shifted.minimizer - canonical.minimizer).cwiseAbs().maxCoeff() <= 1e-12);
  // chi(0) = u* + v0 for the identity transform.
  CHECK((shifted.start - (canonical.minimizer + v0)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("identity transform matches the canonical solver bit for bit") {
  SplitMix64 rng(12);
  const Eigen::Index n = 3;
  const ProblemSpec<double> spec = hjtest::random_spec(rng, n);
  const QuadraticCost<double> cost{1.5, hjtest::random_vec(rng, n, -1.0, 1.0), 0.1};
  const VecXd x = hjtest::random_vec(rng, n, -2.0, 2.0);
  const auto tr = make_transform(MatXd(MatXd::Identity(n, n)), VecXd(VecXd::Zero(n)));
  const auto general = solve_general(tr, spec, cost, x, 0.6);
  const auto direct = hjlax::solve_quadratic(spec, cost, x, 0.6);
  CHECK(general.value == direct.value);
  CHECK(general.minimizer == direct.minimizer);
}

TEST_CASE("diagonal scaling agrees with the ADMM fallback") {
  SplitMix64 rng(27);
  const Eigen::Index n = 2;
  const ProblemSpec<double> spec = hjtest::random_spec(rng, n, 0.5, 3.0);
  MatXd p = MatXd::Zero(n, n);
  p(0, 0) = 1.4;
  p(1, 1) = 0.8;
  const VecXd v0 = hjtest::random_vec(rng, n, -0.5, 0.5);
  const auto tr = make_transform(p, v0);
  const QuadraticCost<double> cost{1.2, hjtest::random_vec(rng, n, -1.0, 1.0), 0.0};
  const VecXd x = hjtest::random_vec(rng, n, -2.0, 2.0);
  const double t = 0.5;

  const auto exact = solve_general(tr, spec, cost, x, t);
  AdmmConfig<double> cfg;
  cfg.tol = 1e-14;
  const auto admm = solve_general(tr, spec, hjlax::transformed_quadratic_oracle(tr, cost), x, t, cfg);
  REQUIRE(admm.canonical.diagnostics.converged);
  CHECK(admm.value == doctest::Approx(exact.value).epsilon(1e-6));
  CHECK((admm.minimizer - exact.minimizer).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("the exact quadratic path rejects non-diagonal transforms") {
  MatXd p(2, 2);
  p << 1.0, 0.5, 0.0, 1.0;
  const auto tr = make_transform(p, VecXd(VecXd::Zero(2)));
  const ProblemSpec<double> spec{VecXd::Constant(2, 1.0), VecXd::Constant(2, 1.0)};
  const QuadraticCost<double> cost{1.0, VecXd::Zero(2), 0.0};
  CHECK_THROWS_AS(solve_general(tr, spec, cost, VecXd(VecXd::Zero(2)), 0.5),
                  std::invalid_argument);
}

TEST_CASE("transformed quadratic oracle solves its optimality system") {
  SplitMix64 rng(4096);
  int failures = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const MatXd p = random_well_conditioned(rng);
    const VecXd v0 = hjtest::random_vec(rng, 2, -1.0, 1.0);
    const auto tr = make_transform(p, v0);
    const QuadraticCost<double> cost{rng.uniform(0.5, 2.0), hjtest::random_vec(rng, 2, -2.0, 2.0),
                                     0.0};
    const auto oracle = hjlax::transformed_quadratic_oracle(tr, cost);
    const VecXd z = hjtest::random_vec(rng, 2, -2.0, 2.0);
    const double w = rng.uniform(0.2, 4.0);
    const VecXd v = oracle.prox(z, w);
    // Gradient of the wrapped cost plus the prox term must vanish.
    const MatXd q = tr.P_inv_T;
    const VecXd grad =
        cost.lambda * q.transpose() * (q * v - (cost.center - tr.v0)) + w * (v - z);
    if (grad.cwiseAbs().maxCoeff() > 1e-10) ++failures;
    // Value agrees with the x-space cost at the mapped point.
    const double direct = cost(from_canonical(tr, v));
    if (std::abs(oracle.value(v) - direct) > 1e-12 * (1.0 + std::abs(direct))) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("general solves keep value, endpoints, and slope feasibility") {
  SplitMix64 rng(777);
  int failures = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const MatXd p = random_well_conditioned(rng);
    const VecXd v0 = hjtest::random_vec(rng, 2, -1.0, 1.0);
    const auto tr = make_transform(p, v0);
    const ProblemSpec<double> spec = hjtest::random_spec(rng, 2, 0.5, 3.0);
    const QuadraticCost<double> cost{rng.uniform(0.5, 2.0), hjtest::random_vec(rng, 2, -2.0, 2.0),
                                     rng.uniform(-0.5, 0.5)};
    const VecXd x = hjtest::random_vec(rng, 2, -2.0, 2.0);
    const double t = rng.uniform(0.2, 0.8);
    AdmmConfig<double> cfg;
    cfg.tol = 1e-12;
    const auto res = solve_general(tr, spec, hjlax::transformed_quadratic_oracle(tr, cost), x, t, cfg);

    // Value invariance: the lifted value is the canonical value.
    if (res.value != res.canonical.value) ++failures;
    // Path endpoints.
    const VecXd chi0 = hjlax::trajectory_point(tr, res.canonical.trajectory, 0.0);
    const VecXd chit = hjlax::trajectory_point(tr, res.canonical.trajectory, t);
    if ((chi0 - res.start).cwiseAbs().maxCoeff() > 1e-12) ++failures;
    if ((chit - x).cwiseAbs().maxCoeff() > 1e-9) ++failures;
    // P' times the x-space slope falls inside the canonical band on every
    // merged segment.
    std::vector<double> breaks{0.0, t};
    for (const auto& traj : res.canonical.trajectory) {
      for (int j = 0; j < traj.count; ++j) {
        breaks.push_back(traj.segments[static_cast<std::size_t>(j)].s_end);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
      const double s0 = breaks[j];
      const double s1 = breaks[j + 1];
      if (s1 - s0 <= 1e-12) continue;
      const VecXd slope_x =
          (hjlax::trajectory_point(tr, res.canonical.trajectory, s1) -
           hjlax::trajectory_point(tr, res.canonical.trajectory, s0)) /
          (s1 - s0);
      const VecXd canonical_slope = tr.P.transpose() * slope_x;
      for (Eigen::Index i = 0; i < 2; ++i) {
        if (canonical_slope[i] < -spec.b[i] - 1e-8 || canonical_slope[i] > spec.a[i] + 1e-8) {
          ++failures;
        }
      }
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("min-plus pieces solve through the transform") {
  SplitMix64 rng(31337);
  const Eigen::Index n = 2;
  const ProblemSpec<double> spec = hjtest::random_spec(rng, n, 0.5, 3.0);
  const auto tr = make_transform(MatXd(MatXd::Identity(n, n)),
                                 VecXd(hjtest::random_vec(rng, n, -0.5, 0.5)));
  hjlax::MinPlusCost<double> cost;
  cost.pieces = {QuadraticCost<double>{1.0, hjtest::random_vec(rng, n, -2.0, 2.0), 0.0},
                 QuadraticCost<double>{1.0, hjtest::random_vec(rng, n, -2.0, 2.0), -0.4}};
  const VecXd x = hjtest::random_vec(rng, n, -2.0, 2.0);
  const auto res = solve_general(tr, spec, cost, x, 0.5);
  CHECK(res.canonical.diagnostics.selected_piece >= 0);
  CHECK(res.value == res.canonical.value);
}

}  // TEST_SUITE

}  // namespace
