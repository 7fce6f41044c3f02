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

#include "circleflow/ensemble.hpp"
#include "circleflow/run_config.hpp"

namespace circleflow {

inline constexpr int kSchemaVersion = 1;

/// Long-format time series with header path_id,t,hk,min_deriv,stopped.
/// Keeps samples on multiples of `stride` steps (0: the ensemble's
/// record_every), each path's crossing sample and its last sample.
std::string paths_csv(const EnsembleResult& ensemble, std::size_t stride = 0);

/// The echoed config omits output_dir and threads, which do not affect results.
std::string summary_json(const RunConfig& config, const EnsembleSummary& summary);

/// report.json bodies. Every report carries schema_version, experiment,
/// the checks with measured value, relation and threshold, and `passed`.
std::string validate_report_json(const RunConfig& config, const std::vector<CheckResult>& checks);
std::string flow_report_json(const RunConfig& config, const std::vector<CheckResult>& checks);
std::string hitting_report_json(const RunConfig& config, const std::vector<HittingRow>& rows,
                                const std::vector<CheckResult>& checks);
std::string contrast_report_json(const RunConfig& config, const ContrastReport& report);

/// Creates parent directories as needed. Throws std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace circleflow
