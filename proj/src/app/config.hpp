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

// Run configuration: a single JSON document with four sections (problem,
// initial_cost, solver, output).  Scalars broadcast to dim-length vectors;
// arrays must match dim exactly; unknown keys are rejected.  The canonical
// dump of the parsed document is hashed (64-bit FNV-1a) and recorded in
// every CSV the tool emits.

#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjlax/types.hpp"
#include "json.hpp"

namespace hjapp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CostKind { kQuadratic, kSqL1, kMinQuadratics };
enum class Strategy { kAuto, kQuadratic, kAdmm, kMinPlus };

const char* to_string(CostKind k);
const char* to_string(Strategy s);

struct PieceConfig {
  double lambda = 1.0;
  hjlax::VecX<double> center;
  double offset = 0.0;
};

struct ProblemConfig {
  Eigen::Index dim = 0;
  hjlax::VecX<double> a;
  hjlax::VecX<double> b;
  std::optional<hjlax::MatX<double>> P;   // row-major list of rows in JSON
  std::optional<hjlax::VecX<double>> v0;  // running-cost center
};

struct CostConfig {
  CostKind kind = CostKind::kQuadratic;
  double lambda = 1.0;                // quadratic weight
  hjlax::VecX<double> center;         // quadratic / sq_l1 center
  double offset = 0.0;                // quadratic offset
  std::vector<PieceConfig> pieces;    // min_quadratics pieces
};

struct SolverConfig {
  Strategy strategy = Strategy::kAuto;
  double lambda = 1.0;   // ADMM penalty weight
  double tol = 1e-8;     // threshold on the three squared update norms
  int max_iters = 10000;
};

struct OutputConfig {
  std::array<int, 2> axes{1, 2};           // 1-based slice axes
  std::array<double, 2> range{-4.0, 4.0};  // slice range on both axes
  int grid = 81;                           // samples per axis
  std::vector<double> times{0.0};          // slice times
  int trajectory_samples = 101;            // uniform samples for traj output
  std::optional<hjlax::VecX<double>> anchor;  // off-slice coordinates; zeros if absent
};

struct RunConfig {
  ProblemConfig problem;
  CostConfig cost;
  SolverConfig solver;
  OutputConfig output;
  std::string hash;  // 16 hex digits
};

// 64-bit FNV-1a over the canonical (key-sorted) dump, as 16 hex digits.
std::string json_hash(const nlohmann::json& j);

// Both throw ConfigError with a human-readable diagnostic.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Returns a copy of `cfg` resized to `n` axes: vectors are truncated or
// extended by repeating their last entry.  Rejects configs that carry a P
// matrix (resizing a general transform has no canonical meaning).
RunConfig resize_config(const RunConfig& cfg, Eigen::Index n);

// The three shipped experiment setups (also available as files under
// configs/); built by parsing the equivalent JSON documents, so hashes and
// validation match the on-disk versions.
RunConfig builtin_quadratic_config(Eigen::Index n = 10);
RunConfig builtin_sq_l1_config(Eigen::Index n = 10);
RunConfig builtin_min_quadratics_config(Eigen::Index n = 10);
nlohmann::json builtin_quadratic_json(Eigen::Index n = 10);
nlohmann::json builtin_sq_l1_json(Eigen::Index n = 10);
nlohmann::json builtin_min_quadratics_json(Eigen::Index n = 10);

}  // namespace hjapp
