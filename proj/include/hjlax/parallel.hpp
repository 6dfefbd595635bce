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

#include <algorithm>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace hjlax {

// Resolves a requested thread count; 0 means "use the hardware default".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Minimal fork-join loop over [0, n).  Runs serially when the range is at
// most `serial_cutoff` or only one thread is available; otherwise splits the
// range into contiguous chunks, one std::thread each.  The first exception
// thrown by a body (lowest worker index) is rethrown on the caller thread.
template <typename Body>
void parallel_for(Eigen::Index n, unsigned threads, Eigen::Index serial_cutoff, Body&& body) {
  const unsigned budget = resolve_threads(threads);
  if (budget <= 1 || n <= serial_cutoff) {
    for (Eigen::Index i = 0; i < n; ++i) body(i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<Eigen::Index>(static_cast<Eigen::Index>(budget), n));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const Eigen::Index begin = n * w / workers;
    const Eigen::Index end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        for (Eigen::Index i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace hjlax
