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

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "circleflow/flow_sde.hpp"

namespace circleflow {

enum class Experiment { Simulate, Validate, HittingTimes, FlowCheck, Contrast };

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

/// Thrown for anything wrong with a configuration file or override.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HittingConfig {
  std::vector<double> R_grid{0.05, 0.1, 0.2, 0.4};
  double T = 2.0;  // censoring horizon
};

struct ContrastConfig {
  int N_low = 32;
  int N_high = 64;
  std::size_t M = 256;
  double T = 0.5;
  int k = 3;  // norm index of the stability ratio
  ScalingSequence in_class = ScalingSequence::exponential(1.0);
  ScalingSequence out_of_class = ScalingSequence::power_law(1.5);
  double amplitude = 1.0;  // 0 gives the zero-noise sanity run

  friend bool operator==(const ContrastConfig&, const ContrastConfig&) = default;
};

struct FlowCheckConfig {
  std::size_t paths = 1;
  double rotation = 3.141592653589793;
  double wobble = 0.1;  // amplitude of ξ = wobble·sin θ
  std::size_t M = 1024;
  int N = 8;
  double T = 0.5;

  friend bool operator==(const FlowCheckConfig&, const FlowCheckConfig&) = default;
};

struct RunConfig {
  Experiment experiment = Experiment::Simulate;
  SolverConfig solver;
  std::size_t n_paths = 1;
  std::uint64_t master_seed = 0;
  std::size_t record_every = 1;
  std::string output_dir;  // empty: CIRCLEFLOW_OUT, then "circleflow-out"
  unsigned threads = 0;    // 0: hardware concurrency
  HittingConfig hitting;
  ContrastConfig contrast;
  FlowCheckConfig flow_check;

  /// Throws ConfigError.
  void validate() const;
};

bool operator==(const SolverConfig& a, const SolverConfig& b);
bool operator==(const HittingConfig& a, const HittingConfig& b);
bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses a JSON document. Unknown keys are rejected; missing keys keep
/// their defaults. Throws ConfigError.
RunConfig parse_config(std::string_view json_text);

RunConfig load_config(const std::string& path);

/// Serializes every field, so parse_config(config_to_json(c)) == c.
std::string config_to_json(const RunConfig& config);

/// Output directory after applying the override, the config and the environment.
std::string resolve_output_dir(const RunConfig& config, const std::string& override_dir = {});

}  // namespace circleflow
