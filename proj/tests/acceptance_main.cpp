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

// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit code 0 when all pass, 3 otherwise.

#include <iostream>

#include "app/verify.hpp"

int main() {
  const auto outcomes = hjapp::verify::run_criteria();
  return hjapp::verify::print_report(outcomes, std::cout);
}
