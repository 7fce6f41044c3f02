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

#include "circleflow/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace circleflow {

using json = nlohmann::ordered_json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const CheckResult& c : checks) {
    arr.push_back(json{{"name", c.name},
                       {"measured", number(c.measured)},
                       {"relation", c.relation},
                       {"threshold", number(c.threshold)},
                       {"passed", c.passed}});
  }
  return arr;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

json band_to_json(const QuantileBand& band) {
  return json{{"t", band.t}, {"q05", band.q05}, {"q50", band.q50}, {"q95", band.q95}};
}

json report_head(const RunConfig& config, const char* experiment) {
  return json{{"schema_version", kSchemaVersion},
              {"experiment", experiment},
              {"master_seed", config.master_seed},
              {"n_paths", config.n_paths}};
}

std::string finish(json doc, const std::vector<CheckResult>& checks) {
  doc["checks"] = checks_to_json(checks);
  doc["passed"] = all_passed(checks);
  return doc.dump(2) + "\n";
}

}  // namespace

std::string paths_csv(const EnsembleResult& ens, std::size_t stride) {
  if (stride == 0) stride = ens.record_every;
  const double dt = ens.solver.dt;
  std::string out = "path_id,t,hk,min_deriv,stopped\n";
  for (std::size_t id = 0; id < ens.paths.size(); ++id) {
    const PathRecord& path = ens.paths[id];
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
      const PathSample& s = path.samples[i];
      const auto step = static_cast<std::uint64_t>(std::llround(s.t / dt));
      const bool keep = step % stride == 0 || i + 1 == path.samples.size() || (path.tau_R && s.t == *path.tau_R);
      if (!keep) continue;
      fmt::format_to(std::back_inserter(out), "{},{},{},{},{}\n", id, s.t, s.hk, s.min_deriv, s.stopped ? 1 : 0);
    }
  }
  return out;
}

std::string summary_json(const RunConfig& config, const EnsembleSummary& summary) {
  json taus = json::array();
  std::size_t crossed = 0;
  for (const auto& tau : summary.tau_R) {
    taus.push_back(tau ? json(*tau) : json(nullptr));
    crossed += tau.has_value();
  }
  // where and on how many threads a run happened does not change its results
  json echoed = json::parse(config_to_json(config));
  echoed.erase("output_dir");
  echoed.erase("threads");
  json doc{{"schema_version", kSchemaVersion},
           {"experiment", experiment_name(config.experiment)},
           {"config", echoed},
           {"n_paths", summary.n_paths},
           {"n_crossed", crossed},
           {"tau_R", taus},
           {"min_deriv_quantiles", band_to_json(summary.min_deriv)},
           {"hk_quantiles", band_to_json(summary.hk)},
           {"spectral_decay", json{{"exponential_rate", number(summary.decay.exponential_rate)},
                                   {"power_exponent", number(summary.decay.power_exponent)},
                                   {"modes", summary.decay.modes}}}};
  return finish(std::move(doc), summary.checks);
}

std::string validate_report_json(const RunConfig& config, const std::vector<CheckResult>& checks) {
  return finish(report_head(config, "validate"), checks);
}

std::string flow_report_json(const RunConfig& config, const std::vector<CheckResult>& checks) {
  json doc = report_head(config, "flow_check");
  const FlowCheckConfig& fc = config.flow_check;
  doc["flow_check"] = json{{"paths", fc.paths}, {"rotation", fc.rotation}, {"wobble", fc.wobble},
                           {"M", fc.M},         {"N", fc.N},               {"T", fc.T}};
  return finish(std::move(doc), checks);
}

std::string hitting_report_json(const RunConfig& config, const std::vector<HittingRow>& rows,
                                const std::vector<CheckResult>& checks) {
  json doc = report_head(config, "hitting_times");
  json table = json::array();
  for (const HittingRow& r : rows) {
    table.push_back(json{{"R", r.R},
                         {"mean_tau", r.mean},
                         {"stderr", r.stderr_},
                         {"n_paths", r.n_paths},
                         {"n_censored", r.n_censored},
                         {"mean_is_lower_bound", r.lower_bound}});
  }
  doc["censoring_horizon"] = config.hitting.T;
  doc["hitting_times"] = table;
  return finish(std::move(doc), checks);
}

std::string contrast_report_json(const RunConfig& config, const ContrastReport& report) {
  json doc = report_head(config, "contrast_h32");
  const auto arm = [](const ContrastArm& a) {
    return json{{"family", a.family},
                {"mean_hk_low", number(a.mean_low)},
                {"mean_hk_high", number(a.mean_high)},
                {"stability_ratio", number(a.ratio)},
                {"path_min_deriv_quantiles",
                 json{{"q05", number(a.min_deriv_q05)}, {"q50", number(a.min_deriv_q50)}, {"q95", number(a.min_deriv_q95)}}}};
  };
  const ContrastConfig& cc = config.contrast;
  doc["contrast"] = json{{"N_low", cc.N_low}, {"N_high", cc.N_high}, {"M", cc.M},
                         {"T", cc.T},         {"k", cc.k},           {"amplitude", cc.amplitude},
                         {"in_class", arm(report.in_class)},
                         {"out_of_class", arm(report.out_of_class)}};
  return finish(std::move(doc), report.checks);
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace circleflow
