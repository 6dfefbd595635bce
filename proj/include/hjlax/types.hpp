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

#include <Eigen/Core>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>

namespace hjlax {

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
constexpr Scalar infinity() {
  return std::numeric_limits<Scalar>::infinity();
}

namespace detail {

template <typename Scalar>
constexpr Scalar cube(Scalar v) {
  return v * v * v;
}

template <typename Scalar>
inline bool all_finite(std::initializer_list<Scalar> vs) {
  for (Scalar v : vs) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace detail
}  // namespace hjlax
