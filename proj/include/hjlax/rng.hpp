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

#include <cstdint>

namespace hjlax {

// Tiny deterministic generator (SplitMix64).  Unlike the standard
// distributions, the produced stream is identical on every platform and
// compiler, which keeps randomized tests and benchmarks reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from (seed, stream).  Used to give each
// benchmark trial or worker its own counter-based generator so results do not
// depend on thread count or evaluation order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ull * (stream + 0x632BE59BD9B4E019ull)));
  g.next();
  return g.next();
}

}  // namespace hjlax
