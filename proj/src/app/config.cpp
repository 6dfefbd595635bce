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

#include "config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

namespace hjapp {

using nlohmann::json;
using VecXd = hjlax::VecX<double>;
using MatXd = hjlax::MatX<double>;

const char* to_string(CostKind k) {
  switch (k) {
    case CostKind::kQuadratic: return "quadratic";
    case CostKind::kSqL1: return "sq_l1";
    case CostKind::kMinQuadratics: return "min_quadratics";
  }
  return "?";
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kAuto: return "auto";
    case Strategy::kQuadratic: return "quadratic";
    case Strategy::kAdmm: return "admm";
    case Strategy::kMinPlus: return "minplus";
  }
  return "?";
}

std::string json_hash(const nlohmann::json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.count(item.key())) fail(where + ": unknown key '" + item.key() + "'");
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where + " must be finite");
  return v;
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + " must be an integer");
  return j.get<int>();
}

// A number broadcasts to all `dim` entries; an array must list exactly
// `dim` finite numbers.
VecXd get_vector(const json& j, Eigen::Index dim, const std::string& where) {
  if (j.is_number()) return VecXd::Constant(dim, get_number(j, where));
  if (!j.is_array()) fail(where + " must be a number or an array");
  if (static_cast<Eigen::Index>(j.size()) != dim) {
    fail(where + " must have exactly " + std::to_string(dim) + " entries, got " +
         std::to_string(j.size()));
  }
  VecXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v[i] = get_number(j[static_cast<std::size_t>(i)], where + " entry");
  }
  return v;
}

MatXd get_matrix(const json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    fail(where + " must be an array of " + std::to_string(dim) + " rows");
  }
  MatXd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      fail(where + " row " + std::to_string(r + 1) + " must list " + std::to_string(dim) +
           " numbers");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = get_number(row[static_cast<std::size_t>(c)], where + " entry");
    }
  }
  return m;
}

ProblemConfig parse_problem(const json& j) {
  check_keys(j, "problem", {"dim", "a", "b", "P", "v0"});
  ProblemConfig p;
  if (!j.contains("dim")) fail("problem.dim is required");
  p.dim = get_int(j.at("dim"), "problem.dim");
  if (p.dim < 1) fail("problem.dim must be at least 1");
  if (!j.contains("a") || !j.contains("b")) fail("problem.a and problem.b are required");
  p.a = get_vector(j.at("a"), p.dim, "problem.a");
  p.b = get_vector(j.at("b"), p.dim, "problem.b");
  if ((p.a.array() <= 0.0).any() || (p.b.array() <= 0.0).any()) {
    fail("problem.a and problem.b entries must be positive");
  }
  if (j.contains("P")) p.P = get_matrix(j.at("P"), p.dim, "problem.P");
  if (j.contains("v0")) p.v0 = get_vector(j.at("v0"), p.dim, "problem.v0");
  return p;
}

PieceConfig parse_piece(const json& j, Eigen::Index dim, const std::string& where) {
  check_keys(j, where, {"lambda", "center", "offset"});
  PieceConfig piece;
  if (j.contains("lambda")) piece.lambda = get_number(j.at("lambda"), where + ".lambda");
  if (piece.lambda <= 0.0) fail(where + ".lambda must be positive");
  if (!j.contains("center")) fail(where + ".center is required");
  piece.center = get_vector(j.at("center"), dim, where + ".center");
  if (j.contains("offset")) piece.offset = get_number(j.at("offset"), where + ".offset");
  return piece;
}

CostConfig parse_cost(const json& j, Eigen::Index dim) {
  check_keys(j, "initial_cost", {"type", "lambda", "center", "offset", "pieces"});
  CostConfig c;
  if (!j.contains("type")) fail("initial_cost.type is required");
  const std::string type = j.at("type").is_string() ? j.at("type").get<std::string>() : "";
  if (type == "quadratic") {
    c.kind = CostKind::kQuadratic;
  } else if (type == "sq_l1") {
    c.kind = CostKind::kSqL1;
  } else if (type == "min_quadratics") {
    c.kind = CostKind::kMinQuadratics;
  } else {
    fail("initial_cost.type must be one of quadratic, sq_l1, min_quadratics");
  }
  if (c.kind == CostKind::kMinQuadratics) {
    if (j.contains("lambda") || j.contains("center") || j.contains("offset")) {
      fail("initial_cost with type min_quadratics takes only a pieces list");
    }
    if (!j.contains("pieces") || !j.at("pieces").is_array() || j.at("pieces").empty()) {
      fail("initial_cost.pieces must be a non-empty array");
    }
    int idx = 0;
    for (const auto& pj : j.at("pieces")) {
      c.pieces.push_back(
          parse_piece(pj, dim, "initial_cost.pieces[" + std::to_string(idx) + "]"));
      ++idx;
    }
    return c;
  }
  if (j.contains("pieces")) fail("initial_cost.pieces applies only to min_quadratics");
  if (!j.contains("center")) fail("initial_cost.center is required");
  c.center = get_vector(j.at("center"), dim, "initial_cost.center");
  if (c.kind == CostKind::kQuadratic) {
    if (j.contains("lambda")) c.lambda = get_number(j.at("lambda"), "initial_cost.lambda");
    if (c.lambda <= 0.0) fail("initial_cost.lambda must be positive");
    if (j.contains("offset")) c.offset = get_number(j.at("offset"), "initial_cost.offset");
  } else {
    if (j.contains("lambda") || j.contains("offset")) {
      fail("initial_cost with type sq_l1 takes only a center");
    }
  }
  return c;
}

SolverConfig parse_solver(const json& j) {
  check_keys(j, "solver", {"strategy", "lambda", "tol", "max_iters"});
  SolverConfig s;
  if (j.contains("strategy")) {
    const std::string name =
        j.at("strategy").is_string() ? j.at("strategy").get<std::string>() : "";
    if (name == "auto") {
      s.strategy = Strategy::kAuto;
    } else if (name == "quadratic") {
      s.strategy = Strategy::kQuadratic;
    } else if (name == "admm") {
      s.strategy = Strategy::kAdmm;
    } else if (name == "minplus") {
      s.strategy = Strategy::kMinPlus;
    } else {
      fail("solver.strategy must be one of auto, quadratic, admm, minplus");
    }
  }
  if (j.contains("lambda")) s.lambda = get_number(j.at("lambda"), "solver.lambda");
  if (s.lambda <= 0.0) fail("solver.lambda must be positive");
  if (j.contains("tol")) s.tol = get_number(j.at("tol"), "solver.tol");
  if (s.tol <= 0.0) fail("solver.tol must be positive");
  if (j.contains("max_iters")) s.max_iters = get_int(j.at("max_iters"), "solver.max_iters");
  if (s.max_iters < 1) fail("solver.max_iters must be at least 1");
  return s;
}

OutputConfig parse_output(const json& j, Eigen::Index dim) {
  check_keys(j, "output",
             {"axes", "range", "grid", "times", "trajectory_samples", "anchor"});
  OutputConfig o;
  if (dim >= 2) o.axes = {1, 2};
  else o.axes = {1, 1};  // rejected later if a slice is actually requested
  if (j.contains("axes")) {
    const json& a = j.at("axes");
    if (!a.is_array() || a.size() != 2) fail("output.axes must list two axis indices");
    o.axes = {get_int(a[0], "output.axes"), get_int(a[1], "output.axes")};
    for (const int ax : o.axes) {
      if (ax < 1 || ax > dim) fail("output.axes entries must lie in [1, dim]");
    }
    if (o.axes[0] == o.axes[1]) fail("output.axes entries must be distinct");
  }
  if (j.contains("range")) {
    const json& r = j.at("range");
    if (!r.is_array() || r.size() != 2) fail("output.range must be [lo, hi]");
    o.range = {get_number(r[0], "output.range"), get_number(r[1], "output.range")};
    if (!(o.range[0] < o.range[1])) fail("output.range must satisfy lo < hi");
  }
  if (j.contains("grid")) o.grid = get_int(j.at("grid"), "output.grid");
  if (o.grid < 1) fail("output.grid must be at least 1");
  if (j.contains("times")) {
    const json& ts = j.at("times");
    if (!ts.is_array() || ts.empty()) fail("output.times must be a non-empty array");
    o.times.clear();
    for (const auto& tj : ts) {
      const double t = get_number(tj, "output.times entry");
      if (t < 0.0) fail("output.times entries must be nonnegative");
      o.times.push_back(t);
    }
  }
  if (j.contains("trajectory_samples")) {
    o.trajectory_samples = get_int(j.at("trajectory_samples"), "output.trajectory_samples");
  }
  if (o.trajectory_samples < 2) fail("output.trajectory_samples must be at least 2");
  if (j.contains("anchor")) o.anchor = get_vector(j.at("anchor"), dim, "output.anchor");
  return o;
}

}  // namespace

RunConfig parse_config(const json& j) {
  check_keys(j, "top level", {"problem", "initial_cost", "solver", "output"});
  if (!j.contains("problem")) fail("problem section is required");
  if (!j.contains("initial_cost")) fail("initial_cost section is required");
  RunConfig cfg;
  cfg.problem = parse_problem(j.at("problem"));
  cfg.cost = parse_cost(j.at("initial_cost"), cfg.problem.dim);
  cfg.solver = j.contains("solver") ? parse_solver(j.at("solver")) : SolverConfig{};
  cfg.output =
      j.contains("output") ? parse_output(j.at("output"), cfg.problem.dim) : OutputConfig{};
  if (!j.contains("output") && cfg.problem.dim < 2) cfg.output.axes = {1, 1};
  cfg.hash = json_hash(j);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

namespace {

VecXd resize_vector(const VecXd& v, Eigen::Index n) {
  VecXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = v[std::min(i, v.size() - 1)];
  return out;
}

}  // namespace

RunConfig resize_config(const RunConfig& cfg, Eigen::Index n) {
  if (n < 1) fail("resize target dimension must be at least 1");
  if (cfg.problem.P.has_value()) {
    fail("resizing a config with an explicit P matrix is not supported");
  }
  RunConfig out = cfg;
  out.problem.dim = n;
  out.problem.a = resize_vector(cfg.problem.a, n);
  out.problem.b = resize_vector(cfg.problem.b, n);
  if (cfg.problem.v0) out.problem.v0 = resize_vector(*cfg.problem.v0, n);
  if (cfg.cost.kind != CostKind::kMinQuadratics) {
    out.cost.center = resize_vector(cfg.cost.center, n);
  }
  for (auto& piece : out.cost.pieces) piece.center = resize_vector(piece.center, n);
  if (cfg.output.anchor) out.output.anchor = resize_vector(*cfg.output.anchor, n);
  if (n < 2) out.output.axes = {1, 1};
  else if (out.output.axes[0] > n || out.output.axes[1] > n) out.output.axes = {1, 2};
  return out;
}

namespace {

json demo_a_json(Eigen::Index n) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < n; ++i) arr.push_back(i == 0 ? 4.0 : (i == 1 ? 6.0 : 5.0));
  return arr;
}

json demo_b_json(Eigen::Index n) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < n; ++i) arr.push_back(i == 0 ? 3.0 : (i == 1 ? 9.0 : 6.0));
  return arr;
}

json vec_json(std::initializer_list<double> head, Eigen::Index n) {
  json arr = json::array();
  Eigen::Index i = 0;
  for (const double v : head) {
    if (i >= n) break;
    arr.push_back(v);
    ++i;
  }
  for (; i < n; ++i) arr.push_back(0.0);
  return arr;
}

}  // namespace

json builtin_quadratic_json(Eigen::Index n) {
  return json{
      {"problem", {{"dim", n}, {"a", demo_a_json(n)}, {"b", demo_b_json(n)}}},
      {"initial_cost",
       {{"type", "quadratic"}, {"lambda", 1.0}, {"center", 1.0}, {"offset", 0.0}}},
      {"solver", {{"strategy", "auto"}}},
      {"output",
       {{"axes", {1, 2}},
        {"range", {-4.0, 4.0}},
        {"grid", 81},
        {"times", {0.0, 0.25, 0.5, 1.0}},
        {"trajectory_samples", 101}}}};
}

json builtin_sq_l1_json(Eigen::Index n) {
  return json{
      {"problem", {{"dim", n}, {"a", demo_a_json(n)}, {"b", demo_b_json(n)}}},
      {"initial_cost", {{"type", "sq_l1"}, {"center", 1.0}}},
      {"solver",
       {{"strategy", "admm"}, {"lambda", 1.0}, {"tol", 1e-8}, {"max_iters", 10000}}},
      {"output",
       {{"axes", {1, 2}},
        {"range", {-4.0, 4.0}},
        {"grid", 81},
        {"times", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}},
        {"trajectory_samples", 101}}}};
}

json builtin_min_quadratics_json(Eigen::Index n) {
  return json{
      {"problem", {{"dim", n}, {"a", demo_a_json(n)}, {"b", demo_b_json(n)}}},
      {"initial_cost",
       {{"type", "min_quadratics"},
        {"pieces",
         {{{"lambda", 1.0}, {"center", vec_json({-2.0}, n)}, {"offset", -0.5}},
          {{"lambda", 1.0}, {"center", vec_json({2.0, -2.0, -1.0}, n)}, {"offset", 0.0}},
          {{"lambda", 1.0}, {"center", vec_json({0.0, 2.0}, n)}, {"offset", -1.0}}}}}},
      {"solver", {{"strategy", "minplus"}}},
      {"output",
       {{"axes", {1, 2}},
        {"range", {-4.0, 4.0}},
        {"grid", 81},
        {"times", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}},
        {"trajectory_samples", 101}}}};
}

RunConfig builtin_quadratic_config(Eigen::Index n) {
  return parse_config(builtin_quadratic_json(n));
}

RunConfig builtin_sq_l1_config(Eigen::Index n) { return parse_config(builtin_sq_l1_json(n)); }

RunConfig builtin_min_quadratics_config(Eigen::Index n) {
  return parse_config(builtin_min_quadratics_json(n));
}

}  // namespace hjapp
