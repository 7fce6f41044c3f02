// Copyright 2026 The circleflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "circleflow/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace circleflow {

using json = nlohmann::ordered_json;

namespace {

void expect_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, std::string_view where) {
  for (const auto& item : j.items()) {
    bool found = false;
    for (std::string_view k : known) found = found || item.key() == k;
    if (!found) throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + key + ": " + e.what());
  }
}

json sequence_to_json(const ScalingSequence& s) {
  return json{{"family", s.family_name()}, {"parameter", s.parameter()}};
}

ScalingSequence sequence_from_json(const json& j, std::string_view where) {
  expect_object(j, where);
  reject_unknown(j, {"family", "parameter"}, where);
  std::string family = "exponential";
  double parameter = 1.0;
  read(j, "family", family, where);
  read(j, "parameter", parameter, where);
  try {
    return ScalingSequence::from_name(family, parameter);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(where) + ": " + e.what());
  }
}

json solver_to_json(const SolverConfig& s) {
  return json{{"k", s.k},
              {"R", s.R},
              {"dt", s.dt},
              {"T", s.T},
              {"N", s.N},
              {"M", s.M},
              {"alpha", sequence_to_json(s.alpha)},
              {"scheme", scheme_name(s.scheme)},
              {"truncate", s.truncate}};
}

SolverConfig solver_from_json(const json& j) {
  constexpr std::string_view where = "solver";
  expect_object(j, where);
  reject_unknown(j, {"k", "R", "dt", "T", "N", "M", "alpha", "scheme", "truncate"}, where);
  SolverConfig s;
  read(j, "k", s.k, where);
  read(j, "R", s.R, where);
  read(j, "dt", s.dt, where);
  read(j, "T", s.T, where);
  read(j, "N", s.N, where);
  read(j, "M", s.M, where);
  read(j, "truncate", s.truncate, where);
  if (j.contains("alpha")) s.alpha = sequence_from_json(j.at("alpha"), "solver.alpha");
  if (j.contains("scheme")) {
    std::string name;
    read(j, "scheme", name, where);
    try {
      s.scheme = scheme_from_name(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return s;
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Simulate: return "simulate";
    case Experiment::Validate: return "validate";
    case Experiment::HittingTimes: return "hitting_times";
    case Experiment::FlowCheck: return "flow_check";
    case Experiment::Contrast: return "contrast_h32";
  }
  return "simulate";
}

Experiment experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::Simulate, Experiment::Validate, Experiment::HittingTimes,
                       Experiment::FlowCheck, Experiment::Contrast}) {
    if (experiment_name(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

bool operator==(const SolverConfig& a, const SolverConfig& b) {
  return a.k == b.k && a.R == b.R && a.dt == b.dt && a.T == b.T && a.N == b.N && a.M == b.M &&
         a.alpha == b.alpha && a.scheme == b.scheme && a.truncate == b.truncate;
}

bool operator==(const HittingConfig& a, const HittingConfig& b) {
  return a.R_grid == b.R_grid && a.T == b.T;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.experiment == b.experiment && a.solver == b.solver && a.n_paths == b.n_paths &&
         a.master_seed == b.master_seed && a.record_every == b.record_every &&
         a.output_dir == b.output_dir && a.threads == b.threads && a.hitting == b.hitting &&
         a.contrast == b.contrast && a.flow_check == b.flow_check;
}

void RunConfig::validate() const {
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  if (n_paths < 1) throw ConfigError("n_paths must be at least 1");
  if (record_every < 1) throw ConfigError("record_every must be at least 1");
  if (hitting.R_grid.empty()) throw ConfigError("hitting.R_grid must not be empty");
  for (std::size_t i = 0; i < hitting.R_grid.size(); ++i) {
    if (!(hitting.R_grid[i] > 0.0)) throw ConfigError("hitting.R_grid entries must be positive");
    if (i > 0 && !(hitting.R_grid[i] > hitting.R_grid[i - 1])) {
      throw ConfigError("hitting.R_grid must be strictly increasing");
    }
  }
  if (!(hitting.T > 0.0) || hitting.T < solver.dt) throw ConfigError("hitting.T must be at least dt");
  if (contrast.N_low < 1 || contrast.N_high <= contrast.N_low) {
    throw ConfigError("contrast needs 1 <= N_low < N_high");
  }
  if (!is_power_of_two(contrast.M) || contrast.M < 4 * static_cast<std::size_t>(contrast.N_high)) {
    throw ConfigError("contrast.M must be a power of two and at least 4 N_high");
  }
  if (!(contrast.T >= 0.0)) throw ConfigError("contrast.T must be non-negative");
  if (contrast.k < 0) throw ConfigError("contrast.k must be non-negative");
  if (!(contrast.amplitude >= 0.0)) throw ConfigError("contrast.amplitude must be non-negative");
  if (flow_check.paths < 1) throw ConfigError("flow_check.paths must be at least 1");
  if (flow_check.N < 1 || !is_power_of_two(flow_check.M) ||
      flow_check.M < 4 * static_cast<std::size_t>(flow_check.N)) {
    throw ConfigError("flow_check needs N >= 1 and a power-of-two M >= 4N");
  }
  if (!(flow_check.T >= 0.0)) throw ConfigError("flow_check.T must be non-negative");
  if (!(std::abs(flow_check.wobble) < 1.0)) throw ConfigError("flow_check.wobble must lie in (-1, 1)");
}

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  expect_object(root, "config");
  reject_unknown(root,
                 {"experiment", "solver", "n_paths", "master_seed", "record_every", "output_dir",
                  "threads", "hitting", "contrast", "flow_check"},
                 "config");
  RunConfig c;
  if (root.contains("experiment")) {
    std::string name;
    read(root, "experiment", name, "config");
    c.experiment = experiment_from_name(name);
  }
  if (root.contains("solver")) c.solver = solver_from_json(root.at("solver"));
  read(root, "n_paths", c.n_paths, "config");
  read(root, "master_seed", c.master_seed, "config");
  read(root, "record_every", c.record_every, "config");
  read(root, "output_dir", c.output_dir, "config");
  read(root, "threads", c.threads, "config");

  if (root.contains("hitting")) {
    const json& h = root.at("hitting");
    expect_object(h, "hitting");
    reject_unknown(h, {"R_grid", "T"}, "hitting");
    read(h, "R_grid", c.hitting.R_grid, "hitting");
    read(h, "T", c.hitting.T, "hitting");
  }
  if (root.contains("contrast")) {
    const json& h = root.at("contrast");
    expect_object(h, "contrast");
    reject_unknown(h, {"N_low", "N_high", "M", "T", "k", "in_class", "out_of_class", "amplitude"}, "contrast");
    read(h, "N_low", c.contrast.N_low, "contrast");
    read(h, "N_high", c.contrast.N_high, "contrast");
    read(h, "M", c.contrast.M, "contrast");
    read(h, "T", c.contrast.T, "contrast");
    read(h, "k", c.contrast.k, "contrast");
    read(h, "amplitude", c.contrast.amplitude, "contrast");
    if (h.contains("in_class")) c.contrast.in_class = sequence_from_json(h.at("in_class"), "contrast.in_class");
    if (h.contains("out_of_class")) {
      c.contrast.out_of_class = sequence_from_json(h.at("out_of_class"), "contrast.out_of_class");
    }
  }
  if (root.contains("flow_check")) {
    const json& h = root.at("flow_check");
    expect_object(h, "flow_check");
    reject_unknown(h, {"paths", "rotation", "wobble", "M", "N", "T"}, "flow_check");
    read(h, "paths", c.flow_check.paths, "flow_check");
    read(h, "rotation", c.flow_check.rotation, "flow_check");
    read(h, "wobble", c.flow_check.wobble, "flow_check");
    read(h, "M", c.flow_check.M, "flow_check");
    read(h, "N", c.flow_check.N, "flow_check");
    read(h, "T", c.flow_check.T, "flow_check");
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const RunConfig& c) {
  json root{{"experiment", experiment_name(c.experiment)},
            {"solver", solver_to_json(c.solver)},
            {"n_paths", c.n_paths},
            {"master_seed", c.master_seed},
            {"record_every", c.record_every},
            {"output_dir", c.output_dir},
            {"threads", c.threads},
            {"hitting", json{{"R_grid", c.hitting.R_grid}, {"T", c.hitting.T}}},
            {"contrast", json{{"N_low", c.contrast.N_low},
                              {"N_high", c.contrast.N_high},
                              {"M", c.contrast.M},
                              {"T", c.contrast.T},
                              {"k", c.contrast.k},
                              {"in_class", sequence_to_json(c.contrast.in_class)},
                              {"out_of_class", sequence_to_json(c.contrast.out_of_class)},
                              {"amplitude", c.contrast.amplitude}}},
            {"flow_check", json{{"paths", c.flow_check.paths},
                                {"rotation", c.flow_check.rotation},
                                {"wobble", c.flow_check.wobble},
                                {"M", c.flow_check.M},
                                {"N", c.flow_check.N},
                                {"T", c.flow_check.T}}}};
  return root.dump(2) + "\n";
}

std::string resolve_output_dir(const RunConfig& config, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("CIRCLEFLOW_OUT"); env != nullptr && *env != '\0') return env;
  return "circleflow-out";
}

}  // namespace circleflow
