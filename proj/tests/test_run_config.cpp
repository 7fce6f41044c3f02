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

#include <cstdlib>
#include <string>

#include "circleflow/run_config.hpp"
#include "doctest.h"

using namespace circleflow;

TEST_CASE("empty config keeps every default") {
  const RunConfig c = parse_config("{}");
  CHECK(c == RunConfig{});
  CHECK(c.experiment == Experiment::Simulate);
  CHECK(c.n_paths == 1);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.experiment = Experiment::HittingTimes;
  c.solver.k = 3;
  c.solver.dt = 0.002;
  c.solver.T = 0.7;
  c.solver.N = 12;
  c.solver.M = 128;
  c.solver.alpha = ScalingSequence::gaussian(0.5);
  c.solver.scheme = Scheme::HeunStratonovich;
  c.solver.truncate = false;
  c.n_paths = 17;
  c.master_seed = 0xfeedbeefULL;
  c.record_every = 5;
  c.output_dir = "some/dir";
  c.threads = 2;
  c.hitting.R_grid = {0.1, 0.3};
  c.hitting.T = 1.5;
  c.contrast.amplitude = 0.0;
  c.contrast.out_of_class = ScalingSequence::power_law(2.5);
  c.flow_check.wobble = -0.2;
  const RunConfig back = parse_config(config_to_json(c));
  CHECK(back == c);
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("experiment names") {
  for (Experiment e : {Experiment::Simulate, Experiment::Validate, Experiment::HittingTimes, Experiment::FlowCheck,
                       Experiment::Contrast}) {
    CHECK(experiment_from_name(experiment_name(e)) == e);
  }
  CHECK(experiment_name(Experiment::Contrast) == "contrast_h32");
  CHECK_THROWS_AS(experiment_from_name("simulation"), ConfigError);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_config(R"({"n_path": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"Dt": 0.1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"alpha": {"family": "exponential", "rate": 1}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"hitting": {"grid": [0.1]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"contrast": {"N": 3}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"flow_check": {"angle": 1}})"), ConfigError);
}

TEST_CASE("invalid values are config errors") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"n_paths": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"n_paths": "many"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"record_every": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"dt": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"M": 100}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"scheme": "milstein"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"alpha": {"family": "cauchy", "parameter": 1}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "run"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"hitting": {"R_grid": []}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"hitting": {"R_grid": [0.2, 0.1]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"contrast": {"N_low": 64, "N_high": 32}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"contrast": {"amplitude": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"flow_check": {"wobble": 1.0}})"), ConfigError);
}

TEST_CASE("load_config reports missing files as config errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/circleflow.json"), ConfigError);
}

TEST_CASE("output directory resolution order") {
  RunConfig c;
  unsetenv("CIRCLEFLOW_OUT");
  CHECK(resolve_output_dir(c) == "circleflow-out");
  setenv("CIRCLEFLOW_OUT", "/tmp/from-env", 1);
  CHECK(resolve_output_dir(c) == "/tmp/from-env");
  c.output_dir = "from-config";
  CHECK(resolve_output_dir(c) == "from-config");
  CHECK(resolve_output_dir(c, "from-flag") == "from-flag");
  unsetenv("CIRCLEFLOW_OUT");
}
