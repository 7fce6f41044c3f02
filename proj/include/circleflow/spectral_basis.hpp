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
#include <string>
#include <vector>

#include "circleflow/circle_function.hpp"

namespace circleflow {

enum class ScalingFamily { Exponential, Gaussian, PowerLaw };

/// Positive even sequence λ: Z → (0, ∞) that scales the trigonometric basis.
///
/// Exponential(c): e^{-c|n|}; Gaussian(c): e^{-c n²}; PowerLaw(p): (1+|n|)^{-p}.
/// The first two decay faster than any power and qualify as scaling
/// sequences; PowerLaw does not and exists for contrast runs only.
///
/// A sequence may additionally carry a |n| weight (see times_abs_n()), which
/// is how the λ side of a BasisPair is built from its α side.
class ScalingSequence {
 public:
  static ScalingSequence exponential(double rate = 1.0);
  static ScalingSequence gaussian(double rate);
  static ScalingSequence power_law(double exponent);

  /// Parses "exponential" / "gaussian" / "power_law" with its parameter.
  static ScalingSequence from_name(const std::string& family, double parameter);

  /// n ↦ |n|·value(n) for n ≠ 0, unchanged at n = 0.
  ScalingSequence times_abs_n() const;

  double operator()(int n) const { return value_at(n); }
  double value_at(int n) const;

  /// log λ(n); stays finite where value_at underflows.
  double log_value_at(int n) const;

  bool is_rapidly_decreasing() const { return family_ != ScalingFamily::PowerLaw; }
  ScalingFamily family() const { return family_; }
  double parameter() const { return parameter_; }
  bool abs_n_weighted() const { return abs_n_weight_; }

  std::string family_name() const;
  std::string describe() const;

  friend bool operator==(const ScalingSequence&, const ScalingSequence&) = default;

 private:
  ScalingSequence(ScalingFamily family, double parameter);

  ScalingFamily family_;
  double parameter_;
  bool abs_n_weight_ = false;
};

/// The scaled basis ê_n(θ) = λ(n) cos nθ (n ≥ 0), λ(n) sin nθ (n < 0),
/// truncated to |n| ≤ cutoff and sampled on a grid of `grid_size` points.
class ScaledBasis {
 public:
  /// grid_size = 0 picks the smallest power of two ≥ max(4, 4·cutoff).
  /// Throws if cutoff < 1 or grid_size < 4·cutoff.
  ScaledBasis(ScalingSequence lambda, int cutoff, std::size_t grid_size = 0);

  const ScalingSequence& lambda() const { return lambda_; }
  int cutoff() const { return cutoff_; }
  std::size_t grid_size() const { return grid_size_; }

  /// Number of modes, 2·cutoff + 1.
  std::size_t dimension() const { return static_cast<std::size_t>(2 * cutoff_ + 1); }

  /// ê_n sampled on the grid. Throws std::out_of_range for |n| > cutoff.
  CircleFunction basis_function(int n) const;

  /// ê_n(θ) at a single point.
  double value(int n, double theta) const;

  /// Coordinates of f in this basis, indexed by n + cutoff. Modes of f above
  /// the cutoff are ignored.
  std::vector<double> expand(const CircleFunction& f) const;

  /// Σ c_n ê_n on the grid, with coordinates indexed by n + cutoff.
  CircleFunction synthesize(const std::vector<double>& coords) const;

 private:
  ScalingSequence lambda_;
  int cutoff_;
  std::size_t grid_size_;
};

/// Euclidean norm of a coordinate vector, which is the H_λ norm by fiat
/// (the scaled basis is declared orthonormal).
double coordinate_norm(const std::vector<double>& coords);

/// α together with λ(n) = |n|α(n), λ(0) = α(0).
class BasisPair {
 public:
  /// Throws std::invalid_argument unless lambda(n) = |n|·alpha(n) for
  /// n ≠ 0 and lambda(0) = alpha(0).
  BasisPair(ScalingSequence alpha, ScalingSequence lambda);

  static BasisPair from_alpha(ScalingSequence alpha);

  const ScalingSequence& alpha() const { return alpha_; }
  const ScalingSequence& lambda() const { return lambda_; }

  /// Coordinate of ι(ê_n^{(α)}) along ê_n^{(λ)}: α(n)/λ(n), i.e. 1/|n| and 1 at n = 0.
  double inclusion_coefficient(int n) const;

 private:
  ScalingSequence alpha_;
  ScalingSequence lambda_;
};

struct HilbertSchmidtNorm {
  double value = 0.0;
  /// Upper bound on the squared norm discarded by the truncation, Σ_{|n|>N} 1/n² < 2/N.
  double tail_bound = 0.0;
};

/// HS norm of the truncated inclusion H_α ↪ H_λ over |n| ≤ N.
HilbertSchmidtNorm inclusion_hs_norm(const BasisPair& pair, int cutoff);

/// Trace of the truncated covariance Q_λ = ιι* on H_λ.
double q_lambda_trace(const BasisPair& pair, int cutoff);

/// Diagonal of the truncated Q_λ in the λ-basis, indexed by n + cutoff.
std::vector<double> q_lambda_diagonal(const BasisPair& pair, int cutoff);

/// Empirical decay test: for every k ≤ k_max, |n|^k λ(n) must be
/// non-increasing on [n_k, n_max] for some n_k ≤ n_max/2 and must drop by at
/// least a factor 10 over that range.
bool verify_rapid_decay(const ScalingSequence& lambda, int k_max, int n_max);

}  // namespace circleflow
