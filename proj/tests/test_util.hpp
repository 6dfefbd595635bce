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

#pragma once

#include "hjlax/hjlax.hpp"

namespace hjtest {

struct Sample1D {
  double x;
  double t;
  double u;
  hjlax::Params1D<double> p;
};

// Random scalar instance with a, b in [0.1, 10], t in (0, tmax], x in
// [-4, 4] and u drawn inside the feasibility band.
inline Sample1D random_feasible(hjlax::SplitMix64& rng, double tmax = 2.0) {
  Sample1D s;
  s.p.a = rng.uniform(0.1, 10.0);
  s.p.b = rng.uniform(0.1, 10.0);
  s.x = rng.uniform(-4.0, 4.0);
  s.t = tmax - tmax * rng.u01();
  const double lo = s.x - s.p.a * s.t;
  const double hi = s.x + s.p.b * s.t;
  s.u = lo + (hi - lo) * rng.u01();
  return s;
}

inline hjlax::VecX<double> random_vec(hjlax::SplitMix64& rng, Eigen::Index n, double lo,
                                      double hi) {
  hjlax::VecX<double> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline hjlax::ProblemSpec<double> random_spec(hjlax::SplitMix64& rng, Eigen::Index n,
                                              double lo = 0.5, double hi = 5.0) {
  return hjlax::ProblemSpec<double>{random_vec(rng, n, lo, hi), random_vec(rng, n, lo, hi)};
}

// The n = 10 demonstration setup used across the example configs.
inline hjlax::ProblemSpec<double> demo_spec(Eigen::Index n = 10) {
  hjlax::VecX<double> a = hjlax::VecX<double>::Constant(n, 5.0);
  hjlax::VecX<double> b = hjlax::VecX<double>::Constant(n, 6.0);
  if (n > 0) a[0] = 4.0;
  if (n > 1) a[1] = 6.0;
  if (n > 0) b[0] = 3.0;
  if (n > 1) b[1] = 9.0;
  return hjlax::ProblemSpec<double>{a, b};
}

}  // namespace hjtest
