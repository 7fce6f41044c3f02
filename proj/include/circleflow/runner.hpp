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

#include <string>
#include <vector>

#include "circleflow/run_config.hpp"

namespace circleflow {

enum ExitCode : int { kExitOk = 0, kExitValidationFailed = 1, kExitConfigError = 2, kExitNumerical = 3 };

struct RunOutcome {
  bool passed = true;
  std::vector<std::string> files;  // written artifacts, in write order
};

/// Runs config.experiment and writes its artifacts under out_dir:
/// simulate writes paths.csv and summary.json, validate adds report.json,
/// hitting_times writes all three, flow_check and contrast_h32 write
/// report.json. Throws ConfigError, NumericalError or std::runtime_error.
RunOutcome run_experiment(const RunConfig& config, const std::string& out_dir);

}  // namespace circleflow
