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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "circleflow/runner.hpp"

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<unsigned> threads;
  std::string out;
};

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("config", opts.config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "override master_seed");
  cmd->add_option("--paths", opts.paths, "override n_paths");
  cmd->add_option("--threads", opts.threads, "worker threads (0: all cores); output does not depend on it");
  cmd->add_option("--out", opts.out, "output directory (default: config output_dir, then $CIRCLEFLOW_OUT)");
}

int execute(const Options& opts, std::optional<circleflow::Experiment> forced) {
  using namespace circleflow;
  RunConfig config;
  std::string out_dir;
  try {
    config = load_config(opts.config_path);
    if (forced) config.experiment = *forced;
    if (opts.seed) config.master_seed = *opts.seed;
    if (opts.paths) config.n_paths = *opts.paths;
    if (opts.threads) config.threads = *opts.threads;
    config.validate();
    out_dir = resolve_output_dir(config, opts.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    const RunOutcome outcome = run_experiment(config, out_dir);
    for (const std::string& f : outcome.files) std::cout << f << "\n";
    if (!outcome.passed) {
      std::cerr << "one or more checks failed; see " << out_dir << "\n";
      return kExitValidationFailed;
    }
    return kExitOk;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using circleflow::Experiment;
  CLI::App app{"Stochastic flows of circle maps driven by a spectral noise field"};
  app.require_subcommand(1);

  Options opts;
  struct Command {
    const char* name;
    const char* help;
    std::optional<Experiment> experiment;
  };
  const Command commands[] = {
      {"run", "run the experiment named in the config", std::nullopt},
      {"validate", "ensemble run plus the self-check suite", Experiment::Validate},
      {"flow-check", "flow composition check", Experiment::FlowCheck},
      {"hitting-times", "hitting-time statistics over an R grid", Experiment::HittingTimes},
      {"contrast", "stability contrast between scaling classes", Experiment::Contrast},
  };
  std::optional<Experiment> selected;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, opts);
    sub->callback([&selected, c] { selected = c.experiment; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return circleflow::kExitConfigError;
  }
  return execute(opts, selected);
}
