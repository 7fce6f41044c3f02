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

#include <cstdint>
#include <vector>

#include "circleflow/ensemble.hpp"
#include "circleflow/run_config.hpp"

namespace circleflow {

// Self-checks shared by `circleflow validate` and the acceptance binary.
// Each returns measured value, threshold and verdict; none throws on a
// failed comparison.

/// Σ_m coefficients of B_{n,k} against Stirling numbers, and the expanded
/// term count against Bell numbers from the Bell triangle, n ≤ 8.
/// Measured: number of mismatching entries.
CheckResult check_bell_counts();

/// max relative error of compose_derivative against central differences
/// (h = 1e-4, orders 1 and 2) on `pairs` random trigonometric pairs.
CheckResult check_faa_di_bruno_fd(int pairs, std::uint64_t seed);

/// max relative Parseval defect over `count` random band-limited functions.
CheckResult check_parseval(int count, std::uint64_t seed);

/// max of ‖f'‖_∞ / (c_2 ‖f‖_{H²}) over `count` random functions.
CheckResult check_sobolev_embedding(int count, std::uint64_t seed);

/// Relative gap between the direct HS sum at f = 0 and its closed form.
CheckResult check_hs_closed_form(const ScalingSequence& alpha, int N);

/// max of actual / bound for f in {0, 0.1 sin θ, 0.2 cos 2θ}, k = 2.
CheckResult check_hs_bound(const ScalingSequence& alpha, int N);

/// max of ratio / C_R over `pairs` random pairs in the H² ball of radius R.
CheckResult check_lipschitz(const ScalingSequence& alpha, int N, double R, int pairs, std::uint64_t seed);

/// |tr Q_λ(N) - (1 + π²/3)| against the tail bound 2/N.
CheckResult check_q_trace(int N);

/// 1 when verify_rapid_decay accepts alpha for k ≤ 6.
CheckResult check_rapid_decay(const ScalingSequence& alpha);

/// |sample variance / dt - 1| over 1e5 draws of one mode.
CheckResult check_noise_variance(std::uint64_t seed);

/// |correlation| of two modes over 1e5 steps.
CheckResult check_noise_correlation(std::uint64_t seed);

/// max |ito_correction| over `states` random states.
CheckResult check_ito_correction(const SolverConfig& cfg, int states, std::uint64_t seed);

/// One-step |Heun - Euler| ratio under dt halving from a fixed state.
/// Returns the lower and upper range checks on the worse of the two ratios.
std::vector<CheckResult> check_heun_step_rate(const SolverConfig& cfg, std::uint64_t seed);

/// flow_compose_check for the identity, a rotation and id + wobble·sin θ.
std::vector<CheckResult> check_flow(const FlowCheckConfig& fc, const SolverConfig& base, std::uint64_t seed);

/// Fraction of paths with min_deriv > 0 at every recorded time ≤ τ_R at
/// R = diffeo_radius(k).
CheckResult check_diffeo_preservation(const SolverConfig& cfg, std::uint64_t seed, std::size_t n_paths,
                                      unsigned threads);

/// 1 when the same path simulated twice is bit-identical.
CheckResult check_determinism(const SolverConfig& cfg, std::uint64_t seed);

/// Concatenated vs direct continuation sup error for one path.
CheckResult check_concatenation(const SolverConfig& cfg, std::uint64_t seed);

/// T = 0 yields the single sample (0, 0, 1).
CheckResult check_initial_record(const SolverConfig& cfg);

/// Mean τ_R strictly increasing in R, adjacent standard-error bars
/// disjoint, and E τ_{2R} ≥ 2 E τ_R (within two standard errors) for every
/// pair R, 2R present in the grid.
std::vector<CheckResult> check_hitting_times(const std::vector<HittingRow>& rows);

/// The full list used by `circleflow validate`.
std::vector<CheckResult> validation_suite(const RunConfig& config);

}  // namespace circleflow
