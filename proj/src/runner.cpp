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

#include "circleflow/runner.hpp"

#include <filesystem>

#include "circleflow/ensemble.hpp"
#include "circleflow/output.hpp"
#include "circleflow/validation.hpp"

namespace circleflow {

namespace {

bool passed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

class Writer {
 public:
  Writer(const std::string& dir, RunOutcome& outcome) : dir_(dir), outcome_(outcome) {}

  void operator()(const std::string& name, const std::string& text) {
    const std::string path = (std::filesystem::path(dir_) / name).string();
    write_text_file(path, text);
    outcome_.files.push_back(path);
  }

 private:
  std::string dir_;
  RunOutcome& outcome_;
};

}  // namespace

RunOutcome run_experiment(const RunConfig& config, const std::string& out_dir) {
  config.validate();
  RunOutcome outcome;
  Writer write(out_dir, outcome);
  const SolverConfig& cfg = config.solver;

  switch (config.experiment) {
    case Experiment::Simulate:
    case Experiment::Validate: {
      SimulateOptions opts;
      opts.record_every = config.record_every;
      const EnsembleResult ens = run_ensemble(cfg, config.master_seed, config.n_paths, opts, config.threads);
      const EnsembleSummary summary = summarize(ens);
      write("paths.csv", paths_csv(ens));
      write("summary.json", summary_json(config, summary));
      outcome.passed = summary.all_passed();
      if (config.experiment == Experiment::Validate) {
        const std::vector<CheckResult> checks = validation_suite(config);
        write("report.json", validate_report_json(config, checks));
        outcome.passed = outcome.passed && passed(checks);
      }
      break;
    }
    case Experiment::HittingTimes: {
      const EnsembleResult ens = hitting_time_ensemble(config);
      const EnsembleSummary summary = summarize(ens, config.record_every);
      const std::vector<HittingRow> rows = hitting_time_stats(ens, config.hitting.R_grid, config.hitting.T);
      const std::vector<CheckResult> checks = check_hitting_times(rows);
      write("paths.csv", paths_csv(ens, config.record_every));
      write("summary.json", summary_json(config, summary));
      write("report.json", hitting_report_json(config, rows, checks));
      outcome.passed = summary.all_passed() && passed(checks);
      break;
    }
    case Experiment::FlowCheck: {
      const std::vector<CheckResult> checks = check_flow(config.flow_check, cfg, config.master_seed);
      write("report.json", flow_report_json(config, checks));
      outcome.passed = passed(checks);
      break;
    }
    case Experiment::Contrast: {
      const ContrastReport report = contrast_h32(config);
      write("report.json", contrast_report_json(config, report));
      outcome.passed = passed(report.checks);
      break;
    }
  }
  return outcome;
}

}  // namespace circleflow
