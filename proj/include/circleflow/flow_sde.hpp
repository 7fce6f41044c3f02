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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circleflow/circle_function.hpp"
#include "circleflow/noise.hpp"
#include "circleflow/spectral_basis.hpp"

namespace circleflow {

enum class Scheme { EulerIto, HeunStratonovich };

std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

/// Raised when the state stops being finite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters of the truncated equation dX = Φ_R(X) dW on H^k.
struct SolverConfig {
  int k = 2;                 // Sobolev index of the state norm
  double R = 0.5;            // hitting / truncation radius
  double dt = 1e-3;
  double T = 1.0;
  int N = 16;                // noise mode cutoff
  std::size_t M = 128;       // grid size, ≥ 4N
  ScalingSequence alpha = ScalingSequence::exponential(1.0);
  Scheme scheme = Scheme::EulerIto;
  /// When false the coefficient is Φ itself; τ_R is still recorded.
  bool truncate = true;

  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;

  ScaledBasis noise_basis() const { return ScaledBasis(alpha, N, M); }

  /// round(T / dt).
  std::uint64_t step_count() const;
};

/// X_t (the vector part of X̃_t = id + X_t) with cached diagnostics.
struct FlowState {
  CircleFunction x;
  double t = 0.0;
  double hk = 0.0;         // ‖x‖_{H^k}
  double min_deriv = 1.0;  // min of 1 + x' on a 4× dense grid
  /// Latches to true at the first step with hk ≥ R and stays set; stepping
  /// continues past it under the truncated coefficient.
  bool stopped = false;

  /// X_0 = 0.
  static FlowState initial(const SolverConfig& cfg);

  /// Arbitrary starting point with diagnostics computed.
  static FlowState at(CircleFunction x, double t, const SolverConfig& cfg);
};

/// Applied radial scale: 1 when hk ≤ R (or truncation is off), else R/hk.
double truncation_scale(const FlowState& s, const SolverConfig& cfg);

/// Itô step: x ← x + noise_field(ΔB, α, id + scale·x).
FlowState euler_step(const FlowState& s, const ModeIncrement& inc, const SolverConfig& cfg);

/// Stratonovich predictor-corrector step with F(y) = noise_field(ΔB, α, id + scale(y)·y):
///   x* = x + F(x),   x ← x + (F(x) + F(x*))/2.
FlowState heun_step(const FlowState& s, const ModeIncrement& inc, const SolverConfig& cfg);

/// Dispatches on cfg.scheme.
FlowState advance(const FlowState& s, const ModeIncrement& inc, const SolverConfig& cfg);

/// Stratonovich-to-Itô drift of the equation at the current state,
///   ½ Σ_{|n|≤N} ê_n'(X̃) ê_n(X̃)
/// grouped per frequency as α(n)² n [-sin(nX̃)cos(nX̃) + sin(nX̃)cos(nX̃)]
/// for the cos/sin pair at n ≥ 1 (the n = 0 mode is constant and drops out).
CircleFunction ito_correction(const FlowState& s, const SolverConfig& cfg);

/// Same drift summed mode by mode from the basis derivatives, without
/// pairing. Vanishes up to rounding.
CircleFunction ito_correction_unpaired(const FlowState& s, const SolverConfig& cfg);

struct PathSample {
  double t = 0.0;
  double hk = 0.0;
  double min_deriv = 1.0;
  bool stopped = false;
  std::optional<CircleFunction> snapshot;
};

struct Provenance {
  std::uint64_t master_seed = 0;
  std::uint64_t path_id = 0;
  std::uint64_t start_step = 0;
};

struct PathRecord {
  std::vector<PathSample> samples;
  std::optional<double> tau_R;
  std::optional<std::uint64_t> tau_step;      // fine-step index of the crossing
  std::optional<CircleFunction> state_at_tau;
  /// Hitting times of restarted segments, measured from each restart.
  std::vector<std::optional<double>> restart_taus;
  Provenance provenance;
  CircleFunction final_state;
};

struct SimulateOptions {
  std::size_t record_every = 1;
  bool snapshots = false;
  /// Stop integrating at the first crossing of R.
  bool stop_at_hit = false;
  /// Fine noise steps per solver step (coarsening the same Brownian path).
  std::uint64_t substeps = 1;
};

/// Integrates from X_0 = 0 to cfg.T. Samples are taken at t = 0, every
/// `record_every` steps, at the crossing step, and at the final step. τ_R is
/// the first grid time with hk ≥ R. Throws NumericalError if the state
/// becomes non-finite.
PathRecord simulate_path(const SolverConfig& cfg, NoiseStream stream, std::size_t record_every);
PathRecord simulate_path(const SolverConfig& cfg, NoiseStream stream, const SimulateOptions& opts);

/// Same, from an arbitrary initial vector part.
PathRecord simulate_from(const SolverConfig& cfg, NoiseStream stream, const CircleFunction& x0,
                         const SimulateOptions& opts);

/// Restarts the flow from id at τ_R with `fresh` and continues the record
/// with t ↦ Ỹ_{t-τ_R}∘ξ̃, ξ̃ = id + X_{τ_R}, up to cfg.T. `first` must have
/// crossed R and carry the state at the crossing. Throws
/// std::invalid_argument if ξ̃ is not a diffeomorphism.
PathRecord concatenate(const PathRecord& first, NoiseStream fresh, const SolverConfig& cfg,
                       const SimulateOptions& opts = {});

struct FlowCheckReport {
  double sup_error = 0.0;
  std::size_t compared_steps = 0;
};

/// Runs X̃ from id and Ỹ from ξ̃ with identical increments (no truncation)
/// and reports sup_t sup_θ |Ỹ_t(θ) - X̃_t(ξ̃(θ))| over the grid.
FlowCheckReport flow_compose_check(const SolverConfig& cfg, NoiseStream stream,
                                   const AffineCircleMap& xi);

/// 1/c with c the m = 1 embedding constant for H^k: any state with
/// ‖x‖_{H^k} < R* has ‖x'‖_∞ < 1. Throws for k < 2.
double diffeo_radius(int k);

}  // namespace circleflow
