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

#include "circleflow/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace circleflow {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

// 53-bit uniform in (0, 1].
double open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double counter_gaussian(std::uint64_t seed, std::uint64_t path, std::uint64_t step, int mode) {
  const std::uint64_t k = mix64(seed ^ mix64(path));
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(k),
                                            static_cast<std::uint32_t>(k >> 32)};
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
      static_cast<std::uint32_t>(static_cast<std::int64_t>(mode) + 0x80000000ll), 0u};
  const auto out = philox4x32(ctr, key);
  const std::uint64_t u = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  const std::uint64_t v = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  const double radius = std::sqrt(-2.0 * std::log(open_unit(u)));
  return radius * std::cos(2.0 * std::numbers::pi * open_unit(v));
}

ModeIncrement ModeIncrement::zero(int cutoff, double dt) {
  if (cutoff < 0) throw std::invalid_argument("negative mode cutoff");
  return {cutoff, dt, std::vector<double>(static_cast<std::size_t>(2 * cutoff + 1), 0.0)};
}

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint64_t path_id, int cutoff, double dt,
                         std::uint64_t start_step)
    : master_seed_(master_seed), path_id_(path_id), cutoff_(cutoff), dt_(dt), step_(start_step) {
  if (cutoff < 0) throw std::invalid_argument("negative mode cutoff");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
}

ModeIncrement NoiseStream::increment_at(std::uint64_t step) const {
  ModeIncrement inc = ModeIncrement::zero(cutoff_, dt_);
  const double sd = amplitude_ * std::sqrt(dt_);
  for (int n = -cutoff_; n <= cutoff_; ++n) {
    inc[n] = sd * counter_gaussian(master_seed_, path_id_, step, n);
  }
  return inc;
}

ModeIncrement NoiseStream::next_increment(std::uint64_t fine_steps) {
  if (fine_steps == 0) throw std::invalid_argument("next_increment needs at least one step");
  ModeIncrement total = increment_at(step_);
  for (std::uint64_t s = 1; s < fine_steps; ++s) {
    const ModeIncrement more = increment_at(step_ + s);
    for (std::size_t i = 0; i < total.delta_b.size(); ++i) total.delta_b[i] += more.delta_b[i];
  }
  total.dt = dt_ * static_cast<double>(fine_steps);
  step_ += fine_steps;
  return total;
}

NoiseStream NoiseStream::segment_from(std::uint64_t step) const {
  NoiseStream out = *this;
  out.step_ = step;
  return out;
}

NoiseStream NoiseStream::with_cutoff(int cutoff) const {
  NoiseStream out(master_seed_, path_id_, cutoff, dt_, step_);
  out.amplitude_ = amplitude_;
  return out;
}

NoiseStream NoiseStream::scaled(double amplitude) const {
  NoiseStream out = *this;
  out.amplitude_ = amplitude * amplitude_;
  return out;
}

std::vector<double> noise_field_at(const ModeIncrement& inc, const ScaledBasis& alpha_basis,
                                   std::span<const double> points) {
  const int N = alpha_basis.cutoff();
  if (inc.cutoff != N) throw std::invalid_argument("noise_field: mode cutoff mismatch");
  const auto& alpha = alpha_basis.lambda();
  // ê_n(y) = α(n) cos(ny) for n ≥ 0 and α(n) sin(ny) = -α(n) sin(|n|y) for n < 0.
  std::vector<double> cos_weight(static_cast<std::size_t>(N) + 1);
  std::vector<double> sin_weight(static_cast<std::size_t>(N) + 1, 0.0);
  for (int n = 0; n <= N; ++n) {
    cos_weight[static_cast<std::size_t>(n)] = alpha(n) * inc[n];
    if (n > 0) sin_weight[static_cast<std::size_t>(n)] = -alpha(-n) * inc[-n];
  }
  std::vector<double> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double y = points[j];
    const double c1 = std::cos(y);
    const double s1 = std::sin(y);
    double cn = 1.0;
    double sn = 0.0;
    double sum = cos_weight[0];
    for (int n = 1; n <= N; ++n) {
      const double next = cn * c1 - sn * s1;
      sn = sn * c1 + cn * s1;
      cn = next;
      if (n % 64 == 0) {
        cn = std::cos(static_cast<double>(n) * y);
        sn = std::sin(static_cast<double>(n) * y);
      }
      sum += cos_weight[static_cast<std::size_t>(n)] * cn +
             sin_weight[static_cast<std::size_t>(n)] * sn;
    }
    out[j] = sum;
  }
  return out;
}

CircleFunction noise_field(const ModeIncrement& inc, const ScaledBasis& alpha_basis,
                           const AffineCircleMap& warp) {
  return CircleFunction::from_grid(noise_field_at(inc, alpha_basis, warp.grid_image()));
}

}  // namespace circleflow
