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
#include <functional>
#include <span>
#include <vector>

namespace circleflow {

/// Real Fourier coefficients of a grid function on M points:
///   f(θ) = a_0 + Σ_{n=1}^{M/2} (a_n cos nθ + b_n sin nθ).
/// Both arrays have M/2 + 1 entries; b_0 and b_{M/2} are always zero.
struct FourierCoefficients {
  std::vector<double> cos;
  std::vector<double> sin;

  std::size_t max_mode() const { return cos.empty() ? 0 : cos.size() - 1; }
};

/// A real 2π-periodic function stored as samples on the uniform grid
/// θ_j = 2πj/M (M a power of two, M ≥ 4), together with the Fourier
/// coefficients of its trigonometric interpolant.
///
/// Values are immutable after construction. Coefficients are computed
/// eagerly, so a CircleFunction can be shared across threads freely.
///
/// Norms use the normalized measure dθ/2π: constants c have ‖c‖_{L²} = |c|
/// and pure modes cos nθ, sin nθ have squared norm 1/2.
class CircleFunction {
 public:
  /// Zero function on a 4-point grid.
  CircleFunction();

  /// Throws std::invalid_argument unless values.size() is a power of two ≥ 4.
  static CircleFunction from_grid(std::vector<double> values);

  /// Builds the grid function whose interpolant has the given coefficients.
  /// Coefficient arrays may be shorter than M/2 + 1 (missing modes are zero)
  /// but not longer.
  static CircleFunction from_coefficients(std::size_t grid_size,
                                          std::span<const double> cos_coeffs,
                                          std::span<const double> sin_coeffs);

  static CircleFunction zero(std::size_t grid_size);
  static CircleFunction constant(std::size_t grid_size, double value);
  static CircleFunction sample(std::size_t grid_size,
                               const std::function<double(double)>& fn);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  const FourierCoefficients& coefficients() const { return coeffs_; }

  /// Grid abscissa θ_j.
  double theta(std::size_t j) const;

  /// Interpolant sampled on a grid `factor` times denser (zero padding).
  std::vector<double> dense_values(std::size_t factor) const;

  CircleFunction& operator+=(const CircleFunction& other);
  CircleFunction& operator-=(const CircleFunction& other);
  CircleFunction& operator*=(double scale);

 private:
  CircleFunction(std::vector<double> values, FourierCoefficients coeffs);

  std::vector<double> values_;
  FourierCoefficients coeffs_;
};

CircleFunction operator+(CircleFunction lhs, const CircleFunction& rhs);
CircleFunction operator-(CircleFunction lhs, const CircleFunction& rhs);
CircleFunction operator*(double scale, CircleFunction f);

bool is_power_of_two(std::size_t n);

/// m-th spectral derivative. Mode n scales by n^m with the matching
/// cos/sin rotation. The Nyquist mode is dropped for odd m since its
/// derivative vanishes on the grid.
CircleFunction derivative(const CircleFunction& f, int m);

/// ‖f‖_{L²} under dθ/2π, computed from the coefficients.
double l2_norm(const CircleFunction& f);

/// (‖f‖²_{L²} + ‖f^{(k)}‖²_{L²})^{1/2}. This is the two-term norm, so k = 0
/// gives √2‖f‖_{L²}.
double hk_norm(const CircleFunction& f, int k);

/// max |f| on a grid four times denser than the stored one.
double linf_norm(const CircleFunction& f);

/// Evaluates the trigonometric interpolant at arbitrary points by direct
/// summation.
std::vector<double> evaluate(const CircleFunction& f, std::span<const double> points);
double evaluate(const CircleFunction& f, double point);

/// Degree-one circle map θ ↦ θ + f(θ), where f is the vector part.
class AffineCircleMap {
 public:
  explicit AffineCircleMap(CircleFunction vector_part);

  static AffineCircleMap identity(std::size_t grid_size);
  static AffineCircleMap rotation(std::size_t grid_size, double angle);

  const CircleFunction& vector_part() const { return vector_part_; }
  std::size_t size() const { return vector_part_.size(); }

  double operator()(double theta) const;

  /// θ_j + f(θ_j) for every grid point.
  std::vector<double> grid_image() const;

  /// min of 1 + f' on a grid four times denser than the stored one.
  double min_derivative() const;

  /// True iff min_derivative() > 0.
  bool is_diffeo() const { return min_derivative() > 0.0; }

 private:
  CircleFunction vector_part_;
};

/// min of 1 + f' on a 4× dense grid.
double min_one_plus_derivative(const CircleFunction& f);

/// θ_j ↦ g(θ_j + f(θ_j)), re-sampled on the grid of the warp. The result is
/// not band-limited in general; aliasing is controlled by keeping the grid
/// at least four times the number of modes in play.
CircleFunction compose(const CircleFunction& g, const AffineCircleMap& warp);

/// Admissible constant c with ‖f^{(m)}‖_∞ ≤ c‖f‖_{H^k} for 0 ≤ m < k:
///
///   c² = Σ_{n∈Z} n^{2m} / max(1, (1 + n^{2k})/2),
///
/// summed exactly for |n| ≤ cutoff and closed by the integral tail bound
/// 4·cutoff^{2m-2k+1}/(2k-2m-1), so the returned value is an upper bound of
/// the infinite series. Throws std::invalid_argument unless 0 ≤ m < k.
double sobolev_embedding_constant(int k, int m, int cutoff = 1 << 14);

/// max over m < k of sobolev_embedding_constant(k, m): one constant that
/// serves every lower derivative.
double sobolev_constant(int k);

}  // namespace circleflow
