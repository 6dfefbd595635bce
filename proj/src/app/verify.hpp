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

// Verification suite: eleven self-contained correctness criteria covering
// the closed forms, the oracles, the solvers, and the CSV exporters, each
// with pinned tolerances and a wall-clock budget.  All randomness is seeded
// with fixed constants so every run checks the same instances.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hjapp::verify {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the requested criteria (all eleven when `ids` is empty) on `threads`
// worker threads where the underlying solvers support it.  Unknown ids
// throw std::invalid_argument.
std::vector<Outcome> run_criteria(const std::vector<int>& ids = {}, unsigned threads = 1);

// One PASS/FAIL line per outcome; returns 0 if everything passed, else 3.
int print_report(const std::vector<Outcome>& outcomes, std::ostream& os);

}  // namespace hjapp::verify
