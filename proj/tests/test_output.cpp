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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "circleflow/output.hpp"
#include "circleflow/runner.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace circleflow;
using nlohmann::json;

namespace {

PathSample sample_at(double t, double hk, double min_deriv, bool stopped = false) {
  PathSample s;
  s.t = t;
  s.hk = hk;
  s.min_deriv = min_deriv;
  s.stopped = stopped;
  return s;
}

EnsembleResult two_paths() {
  EnsembleResult ens;
  ens.solver.dt = 0.1;
  ens.solver.T = 0.4;
  ens.record_every = 1;
  PathRecord a;
  a.samples = {sample_at(0.0, 0.0, 1.0), sample_at(0.1, 0.25, 0.9), sample_at(0.2, 0.6, 0.8, true),
               sample_at(0.30000000000000004, 0.7, 0.7, true), sample_at(0.4, 0.8, 0.6, true)};
  a.tau_R = 0.2;
  PathRecord b;
  b.samples = {sample_at(0.0, 0.0, 1.0), sample_at(0.1, 1e-17, 1.0 / 3.0)};
  ens.paths = {a, b};
  return ens;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("paths.csv uses shortest round-trip numbers") {
  const std::string csv = paths_csv(two_paths());
  CHECK(csv ==
        "path_id,t,hk,min_deriv,stopped\n"
        "0,0,0,1,0\n"
        "0,0.1,0.25,0.9,0\n"
        "0,0.2,0.6,0.8,1\n"
        "0,0.30000000000000004,0.7,0.7,1\n"
        "0,0.4,0.8,0.6,1\n"
        "1,0,0,1,0\n"
        "1,0.1,1e-17,0.3333333333333333,0\n");
}

TEST_CASE("paths.csv stride keeps the crossing and the last sample") {
  const std::string csv = paths_csv(two_paths(), 4);
  CHECK(csv ==
        "path_id,t,hk,min_deriv,stopped\n"
        "0,0,0,1,0\n"
        "0,0.2,0.6,0.8,1\n"
        "0,0.4,0.8,0.6,1\n"
        "1,0,0,1,0\n"
        "1,0.1,1e-17,0.3333333333333333,0\n");
}

TEST_CASE("summary.json layout") {
  RunConfig rc;
  EnsembleSummary s;
  s.n_paths = 2;
  s.tau_R = {0.2, std::nullopt};
  s.hk.t = {0.0};
  s.hk.q05 = s.hk.q50 = s.hk.q95 = {0.0};
  s.checks.push_back(make_check("one", 1.0, "==", 1.0));
  s.checks.push_back(make_check("bad", NAN, "<=", 1.0));
  const json doc = json::parse(summary_json(rc, s));
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["experiment"] == "simulate");
  CHECK(doc["n_crossed"] == 1);
  CHECK(doc["tau_R"][0] == 0.2);
  CHECK(doc["tau_R"][1].is_null());
  CHECK(doc["checks"][1]["measured"].is_null());
  CHECK(doc["passed"] == false);
  CHECK(parse_config(doc["config"].dump()) == rc);
}

TEST_CASE("hitting report marks lower bounds") {
  RunConfig rc;
  HittingRow row;
  row.R = 0.4;
  row.mean = 2.0;
  row.n_paths = 3;
  row.n_censored = 3;
  row.lower_bound = true;
  const json doc = json::parse(hitting_report_json(rc, {row}, {}));
  CHECK(doc["experiment"] == "hitting_times");
  CHECK(doc["hitting_times"][0]["mean_is_lower_bound"] == true);
  CHECK(doc["censoring_horizon"] == 2.0);
  CHECK(doc["passed"] == true);
}

TEST_CASE("runner writes the artifacts of each experiment") {
  const auto dir = std::filesystem::temp_directory_path() / "circleflow-runner-test";
  std::filesystem::remove_all(dir);
  RunConfig rc;
  rc.solver.dt = 0.01;
  rc.solver.T = 0.1;
  rc.solver.N = 8;
  rc.solver.M = 64;
  rc.n_paths = 3;
  rc.master_seed = 12;

  const RunOutcome sim = run_experiment(rc, (dir / "sim").string());
  CHECK(sim.passed);
  REQUIRE(sim.files.size() == 2);
  CHECK(std::filesystem::exists(dir / "sim" / "paths.csv"));
  CHECK(std::filesystem::exists(dir / "sim" / "summary.json"));
  const RunOutcome again = run_experiment(rc, (dir / "again").string());
  CHECK(read_file(dir / "sim" / "paths.csv") == read_file(dir / "again" / "paths.csv"));
  CHECK(read_file(dir / "sim" / "summary.json") == read_file(dir / "again" / "summary.json"));

  rc.experiment = Experiment::FlowCheck;
  rc.flow_check.M = 256;
  rc.flow_check.T = 0.05;
  const RunOutcome flow = run_experiment(rc, (dir / "flow").string());
  CHECK(flow.passed);
  REQUIRE(flow.files.size() == 1);
  CHECK(json::parse(read_file(dir / "flow" / "report.json"))["checks"].size() == 3);

  rc.experiment = Experiment::HittingTimes;
  rc.solver.truncate = false;
  rc.hitting.R_grid = {0.01, 0.02};
  rc.hitting.T = 0.2;
  const RunOutcome hit = run_experiment(rc, (dir / "hit").string());
  CHECK(hit.files.size() == 3);

  rc.n_paths = 0;
  CHECK_THROWS_AS(run_experiment(rc, (dir / "bad").string()), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("summary.json does not depend on threads or output_dir") {
  RunConfig a;
  RunConfig b;
  b.threads = 7;
  b.output_dir = "elsewhere";
  const EnsembleSummary s;
  CHECK(summary_json(a, s) == summary_json(b, s));
  const json doc = json::parse(summary_json(b, s));
  CHECK_FALSE(doc["config"].contains("threads"));
  CHECK_FALSE(doc["config"].contains("output_dir"));
}
