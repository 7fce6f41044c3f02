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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "circleflow/circle_function.hpp"
#include "circleflow/spectral_basis.hpp"

namespace circleflow {

/// Philox4x32-10 block: a counter-based generator, so any draw can be
/// produced directly from its coordinates.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to fold (seed, path) into a Philox key.
std::uint64_t mix64(std::uint64_t x);

/// Standard normal draw addressed by (seed, path, step, mode). The key is
/// mix64(seed ^ mix64(path)); the counter is (step low, step high, mode + 2^31, 0).
/// The four output words form two 64-bit uniforms fed to Box-Muller.
double counter_gaussian(std::uint64_t seed, std::uint64_t path, std::uint64_t step, int mode);

/// Brownian increments ΔB^{(n)}, n = -N..N, for one time step.
struct ModeIncrement {
  int cutoff = 0;
  double dt = 0.0;
  std::vector<double> delta_b;  // indexed by n + cutoff

  double operator[](int n) const { return delta_b[static_cast<std::size_t>(n + cutoff)]; }
  double& operator[](int n) { return delta_b[static_cast<std::size_t>(n + cutoff)]; }

  static ModeIncrement zero(int cutoff, double dt);
};

/// Per-path source of mode increments. Each draw is a pure function of
/// (master_seed, path_id, fine step, mode), so replaying a path, skipping
/// ahead, or aggregating fine steps into coarse ones never changes the
/// underlying Brownian path.
class NoiseStream {
 public:
  /// `dt` is the fine step; next_increment(m) returns the sum over m fine steps.
  NoiseStream(std::uint64_t master_seed, std::uint64_t path_id, int cutoff, double dt,
              std::uint64_t start_step = 0);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t path_id() const { return path_id_; }
  int cutoff() const { return cutoff_; }
  double dt() const { return dt_; }
  std::uint64_t step_index() const { return step_; }

  /// Increment over the next `fine_steps` fine steps; variance fine_steps·dt per mode.
  ModeIncrement next_increment(std::uint64_t fine_steps = 1);

  /// Increment of one fine step, without advancing.
  ModeIncrement increment_at(std::uint64_t step) const;

  /// The same Brownian path observed from fine step `step` onward.
  NoiseStream segment_from(std::uint64_t step) const;

  /// Same path truncated or extended to a different mode cutoff. Shared modes
  /// keep identical draws.
  NoiseStream with_cutoff(int cutoff) const;

  /// Same path with every increment multiplied by `amplitude` (0 silences it).
  NoiseStream scaled(double amplitude) const;
  double amplitude() const { return amplitude_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t path_id_;
  int cutoff_;
  double dt_;
  std::uint64_t step_;
  double amplitude_ = 1.0;
};

/// θ_j ↦ Σ_{|n|≤N} ΔB_n ê_n^{(α)}(warp(θ_j)), with each basis function
/// evaluated exactly at the warped grid points. Throws if the increment and
/// basis cutoffs differ.
CircleFunction noise_field(const ModeIncrement& inc, const ScaledBasis& alpha_basis,
                           const AffineCircleMap& warp);

/// Same, at explicit points.
std::vector<double> noise_field_at(const ModeIncrement& inc, const ScaledBasis& alpha_basis,
                                   std::span<const double> points);

}  // namespace circleflow
