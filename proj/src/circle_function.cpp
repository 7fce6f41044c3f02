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

#include "circleflow/circle_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "fft.hpp"

namespace circleflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kDenseFactor = 4;

void require_grid(std::size_t n) {
  if (n < 4 || !is_power_of_two(n)) {
    throw std::invalid_argument("grid size must be a power of two >= 4, got " +
                                std::to_string(n));
  }
}

void require_same_grid(const CircleFunction& a, const CircleFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("grid size mismatch");
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

CircleFunction::CircleFunction() : CircleFunction(zero(4)) {}

CircleFunction::CircleFunction(std::vector<double> values, FourierCoefficients coeffs)
    : values_(std::move(values)), coeffs_(std::move(coeffs)) {}

CircleFunction CircleFunction::from_grid(std::vector<double> values) {
  require_grid(values.size());
  FourierCoefficients coeffs = detail::forward_real(values);
  return CircleFunction(std::move(values), std::move(coeffs));
}

CircleFunction CircleFunction::from_coefficients(std::size_t grid_size,
                                                 std::span<const double> cos_coeffs,
                                                 std::span<const double> sin_coeffs) {
  require_grid(grid_size);
  const std::size_t half = grid_size / 2;
  if (cos_coeffs.size() > half + 1 || sin_coeffs.size() > half + 1) {
    throw std::invalid_argument("from_coefficients: more modes than the grid resolves");
  }
  FourierCoefficients c;
  c.cos.assign(half + 1, 0.0);
  c.sin.assign(half + 1, 0.0);
  std::copy(cos_coeffs.begin(), cos_coeffs.end(), c.cos.begin());
  std::copy(sin_coeffs.begin(), sin_coeffs.end(), c.sin.begin());
  c.sin[0] = 0.0;
  c.sin[half] = 0.0;
  std::vector<double> values = detail::inverse_real(c, grid_size);
  return CircleFunction(std::move(values), std::move(c));
}

CircleFunction CircleFunction::zero(std::size_t grid_size) {
  return constant(grid_size, 0.0);
}

CircleFunction CircleFunction::constant(std::size_t grid_size, double value) {
  require_grid(grid_size);
  FourierCoefficients c;
  c.cos.assign(grid_size / 2 + 1, 0.0);
  c.sin.assign(grid_size / 2 + 1, 0.0);
  c.cos[0] = value;
  return CircleFunction(std::vector<double>(grid_size, value), std::move(c));
}

CircleFunction CircleFunction::sample(std::size_t grid_size,
                                      const std::function<double(double)>& fn) {
  require_grid(grid_size);
  std::vector<double> values(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    values[j] = fn(kTwoPi * static_cast<double>(j) / static_cast<double>(grid_size));
  }
  return from_grid(std::move(values));
}

double CircleFunction::theta(std::size_t j) const {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(size());
}

std::vector<double> CircleFunction::dense_values(std::size_t factor) const {
  if (factor == 1) return values_;
  if (!is_power_of_two(factor)) throw std::invalid_argument("dense factor must be a power of two");
  return detail::inverse_real(coeffs_, size() * factor);
}

CircleFunction& CircleFunction::operator+=(const CircleFunction& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  for (std::size_t n = 0; n < coeffs_.cos.size(); ++n) {
    coeffs_.cos[n] += other.coeffs_.cos[n];
    coeffs_.sin[n] += other.coeffs_.sin[n];
  }
  return *this;
}

CircleFunction& CircleFunction::operator-=(const CircleFunction& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  for (std::size_t n = 0; n < coeffs_.cos.size(); ++n) {
    coeffs_.cos[n] -= other.coeffs_.cos[n];
    coeffs_.sin[n] -= other.coeffs_.sin[n];
  }
  return *this;
}

CircleFunction& CircleFunction::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  for (std::size_t n = 0; n < coeffs_.cos.size(); ++n) {
    coeffs_.cos[n] *= scale;
    coeffs_.sin[n] *= scale;
  }
  return *this;
}

CircleFunction operator+(CircleFunction lhs, const CircleFunction& rhs) { return lhs += rhs; }
CircleFunction operator-(CircleFunction lhs, const CircleFunction& rhs) { return lhs -= rhs; }
CircleFunction operator*(double scale, CircleFunction f) { return f *= scale; }

CircleFunction derivative(const CircleFunction& f, int m) {
  if (m < 0) throw std::invalid_argument("derivative order must be non-negative");
  if (m == 0) return f;
  const FourierCoefficients& c = f.coefficients();
  const std::size_t half = c.max_mode();
  std::vector<double> a(half + 1, 0.0);
  std::vector<double> b(half + 1, 0.0);
  // d/dθ (a cos nθ + b sin nθ) = n (b cos nθ - a sin nθ); m applications
  // rotate by m quarter turns and scale by n^m.
  for (std::size_t n = 1; n <= half; ++n) {
    const double scale = std::pow(static_cast<double>(n), m);
    double an = c.cos[n];
    double bn = c.sin[n];
    switch (m % 4) {
      case 0: break;
      case 1: std::tie(an, bn) = std::pair(bn, -an); break;
      case 2: std::tie(an, bn) = std::pair(-an, -bn); break;
      case 3: std::tie(an, bn) = std::pair(-bn, an); break;
    }
    a[n] = scale * an;
    b[n] = scale * bn;
  }
  if (m % 2 == 1) a[half] = 0.0;
  b[half] = 0.0;
  return CircleFunction::from_coefficients(f.size(), a, b);
}

double l2_norm(const CircleFunction& f) {
  const FourierCoefficients& c = f.coefficients();
  double sum = c.cos[0] * c.cos[0];
  for (std::size_t n = 1; n < c.cos.size(); ++n) {
    sum += 0.5 * (c.cos[n] * c.cos[n] + c.sin[n] * c.sin[n]);
  }
  return std::sqrt(sum);
}

double hk_norm(const CircleFunction& f, int k) {
  if (k < 0) throw std::invalid_argument("Sobolev index must be non-negative");
  const double base = l2_norm(f);
  const double top = l2_norm(derivative(f, k));
  return std::sqrt(base * base + top * top);
}

double linf_norm(const CircleFunction& f) {
  const std::vector<double> dense = f.dense_values(kDenseFactor);
  double best = 0.0;
  for (double v : dense) best = std::max(best, std::abs(v));
  return best;
}

double evaluate(const CircleFunction& f, double point) {
  const FourierCoefficients& c = f.coefficients();
  const double c1 = std::cos(point);
  const double s1 = std::sin(point);
  double cn = 1.0;
  double sn = 0.0;
  double sum = c.cos[0];
  for (std::size_t n = 1; n < c.cos.size(); ++n) {
    const double next_c = cn * c1 - sn * s1;
    sn = sn * c1 + cn * s1;
    cn = next_c;
    // Re-anchor periodically to keep the rotation from drifting.
    if (n % 64 == 0) {
      const double angle = static_cast<double>(n) * point;
      cn = std::cos(angle);
      sn = std::sin(angle);
    }
    sum += c.cos[n] * cn + c.sin[n] * sn;
  }
  return sum;
}

std::vector<double> evaluate(const CircleFunction& f, std::span<const double> points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = evaluate(f, points[i]);
  return out;
}

AffineCircleMap::AffineCircleMap(CircleFunction vector_part)
    : vector_part_(std::move(vector_part)) {}

AffineCircleMap AffineCircleMap::identity(std::size_t grid_size) {
  return AffineCircleMap(CircleFunction::zero(grid_size));
}

AffineCircleMap AffineCircleMap::rotation(std::size_t grid_size, double angle) {
  return AffineCircleMap(CircleFunction::constant(grid_size, angle));
}

double AffineCircleMap::operator()(double theta) const {
  return theta + evaluate(vector_part_, theta);
}

std::vector<double> AffineCircleMap::grid_image() const {
  std::vector<double> out(size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = vector_part_.theta(j) + vector_part_[j];
  }
  return out;
}

double AffineCircleMap::min_derivative() const { return min_one_plus_derivative(vector_part_); }

double min_one_plus_derivative(const CircleFunction& f) {
  const std::vector<double> dense = derivative(f, 1).dense_values(kDenseFactor);
  return 1.0 + *std::min_element(dense.begin(), dense.end());
}

CircleFunction compose(const CircleFunction& g, const AffineCircleMap& warp) {
  return CircleFunction::from_grid(evaluate(g, warp.grid_image()));
}

double sobolev_embedding_constant(int k, int m, int cutoff) {
  if (m < 0 || m >= k) {
    throw std::invalid_argument("embedding constant needs 0 <= m < k");
  }
  if (cutoff < 1) throw std::invalid_argument("embedding cutoff must be positive");
  // n = 0 contributes 0^{2m}/max(1, 1/2) = [m == 0].
  double sum = (m == 0) ? 1.0 : 0.0;
  for (int n = cutoff; n >= 1; --n) {
    const double x = static_cast<double>(n);
    const double weight = std::max(1.0, 0.5 * (1.0 + std::pow(x, 2 * k)));
    sum += 2.0 * std::pow(x, 2 * m) / weight;  // ±n
  }
  // Each term is ≤ 2 n^{2m-2k}; the tail over both signs is bounded by the
  // integral from `cutoff`.
  const double excess = static_cast<double>(2 * k - 2 * m - 1);
  const double tail = 4.0 * std::pow(static_cast<double>(cutoff), -excess) / excess;
  return std::sqrt(sum + tail);
}

double sobolev_constant(int k) {
  double best = 0.0;
  for (int m = 0; m < k; ++m) best = std::max(best, sobolev_embedding_constant(k, m));
  return best;
}

}  // namespace circleflow
