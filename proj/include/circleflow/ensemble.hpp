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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "circleflow/flow_sde.hpp"
#include "circleflow/run_config.hpp"

namespace circleflow {

/// Runs body(i) for i in [0, count) on `threads` workers (0: hardware
/// concurrency). The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

struct EnsembleResult {
  SolverConfig solver;
  std::uint64_t master_seed = 0;
  std::size_t record_every = 1;
  std::vector<PathRecord> paths;  // index = path_id
};

/// One path per id 0..n_paths-1, each driven by NoiseStream(seed, id, N, dt).
/// The result does not depend on the thread count.
EnsembleResult run_ensemble(const SolverConfig& cfg, std::uint64_t master_seed, std::size_t n_paths,
                            const SimulateOptions& opts, unsigned threads);

/// Linear-interpolation sample quantile (Hyndman-Fan type 7), p in [0, 1].
double quantile(std::vector<double> values, double p);

struct QuantileBand {
  std::vector<double> t;
  std::vector<double> q05, q50, q95;
};

/// log-amplitude fits of the mean Fourier amplitude |c_n| over 1 ≤ n ≤ modes:
/// log|c_n| ≈ a - rate·n and log|c_n| ≈ b - power·log n.
struct SpectralDecayFit {
  double exponential_rate = 0.0;
  double power_exponent = 0.0;
  int modes = 0;
};

SpectralDecayFit fit_spectral_decay(const std::vector<CircleFunction>& states, int modes);

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", "<", ">=", ">" or "=="
  bool passed = false;
};

CheckResult make_check(std::string name, double measured, std::string relation, double threshold);

struct EnsembleSummary {
  std::size_t n_paths = 0;
  std::vector<std::optional<double>> tau_R;  // by path_id
  QuantileBand min_deriv;
  QuantileBand hk;
  SpectralDecayFit decay;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Quantiles over paths at the regular recording times (multiples of
/// `stride` steps, default the ensemble's record_every, and the final
/// step), plus the structural checks.
EnsembleSummary summarize(const EnsembleResult& ensemble, std::size_t stride = 0);

struct HittingRow {
  double R = 0.0;
  double mean = 0.0;      // censored paths enter as T
  double stderr_ = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_censored = 0;
  bool lower_bound = false;  // true when any path is censored
};

/// First crossing of each R from per-step hk samples; paths that never
/// reach R by `horizon` are censored at the horizon and never imputed.
std::vector<HittingRow> hitting_time_stats(const EnsembleResult& ensemble, const std::vector<double>& R_grid,
                                           double horizon);

/// Simulates once per path with R = max(R_grid), stopping at that crossing.
EnsembleResult hitting_time_ensemble(const RunConfig& config);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
/// distribution at the effective size n·m/(n+m).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic tail P(K > x) of the Kolmogorov distribution.
double kolmogorov_survival(double x);

struct ContrastArm {
  std::string family;
  double mean_low = 0.0;   // ensemble mean of ‖X_T‖_{H^k} at N_low
  double mean_high = 0.0;  // same at N_high
  double ratio = 1.0;      // mean_high / mean_low (1 when both vanish)
  double min_deriv_q05 = 1.0, min_deriv_q50 = 1.0, min_deriv_q95 = 1.0;  // of per-path min over time
};

struct ContrastReport {
  ContrastArm in_class;
  ContrastArm out_of_class;
  std::vector<CheckResult> checks;
};

/// Matched ensembles (shared modes draw identical increments) at N_low and
/// N_high for the in-class and out-of-class scaling sequences, untruncated.
ContrastReport contrast_h32(const RunConfig& config);

struct ConcatenationStats {
  std::vector<double> first;    // τ_R from id, censored at T
  std::vector<double> restart;  // τ'_R of the restart on the next stream segment
  std::size_t censored_first = 0;
  std::size_t censored_restart = 0;
  KsResult ks;
};

/// Hitting times of the first segment and of a restart from id driven by
/// the increments after τ_R, each with the full horizon cfg.T.
ConcatenationStats concatenation_hitting_times(const SolverConfig& cfg, std::uint64_t master_seed,
                                               std::size_t n_paths, unsigned threads);

/// sup over recorded times of |concatenated - direct| for one path with the
/// restart driven by the same Brownian path; run untruncated. Returns
/// nullopt when the path never reaches R.
std::optional<double> concatenation_consistency(const SolverConfig& cfg, std::uint64_t master_seed,
                                                std::uint64_t path_id);

/// Pathwise sup_t sup_θ |X^Euler - X^Heun| on the recording grid of the
/// coarsest step, both schemes driven by the same fine Brownian path of
/// step `fine_dt` aggregated `substeps` at a time.
double euler_heun_gap(const SolverConfig& cfg, std::uint64_t master_seed, std::uint64_t path_id,
                      double fine_dt, std::uint64_t substeps, double sample_every);

}  // namespace circleflow
