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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "circleflow/noise.hpp"
#include "doctest.h"

using namespace circleflow;
using doctest::Approx;

TEST_CASE("Philox reference vector") {
  // Published known-answer test for Philox4x32-10 with all-ones inputs.
  const auto out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);
  const auto zero = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);
}

TEST_CASE("draws are a pure function of their coordinates") {
  NoiseStream a(42, 3, 8, 1e-3);
  NoiseStream b(42, 3, 8, 1e-3);
  for (int i = 0; i < 10; ++i) CHECK(a.next_increment().delta_b == b.next_increment().delta_b);
  CHECK(a.step_index() == 10);
  CHECK(a.increment_at(5).delta_b == b.increment_at(5).delta_b);
  CHECK(counter_gaussian(1, 2, 3, -4) == counter_gaussian(1, 2, 3, -4));
  CHECK(counter_gaussian(1, 2, 3, -4) != counter_gaussian(1, 3, 3, -4));
  CHECK(counter_gaussian(1, 2, 3, -4) != counter_gaussian(2, 2, 3, -4));
  CHECK(counter_gaussian(1, 2, 3, -4) != counter_gaussian(1, 2, 3, 4));

  const auto seg = a.segment_from(5);
  CHECK(seg.step_index() == 5);
  NoiseStream replay = seg;
  CHECK(replay.next_increment().delta_b == NoiseStream(42, 3, 8, 1e-3).increment_at(5).delta_b);
}

TEST_CASE("aggregation, cutoff changes and scaling keep the Brownian path") {
  NoiseStream fine(7, 0, 4, 1e-3);
  NoiseStream coarse = fine;
  ModeIncrement sum = ModeIncrement::zero(4, 0.0);
  for (int i = 0; i < 4; ++i) {
    const auto inc = fine.next_increment();
    for (int n = -4; n <= 4; ++n) sum[n] += inc[n];
  }
  const auto big = coarse.next_increment(4);
  CHECK(big.dt == Approx(4e-3));
  for (int n = -4; n <= 4; ++n) CHECK(big[n] == Approx(sum[n]).epsilon(1e-15));
  CHECK(coarse.step_index() == 4);
  CHECK_THROWS_AS(coarse.next_increment(0), std::invalid_argument);

  const auto wide = NoiseStream(7, 0, 4, 1e-3).with_cutoff(9).increment_at(2);
  const auto narrow = NoiseStream(7, 0, 4, 1e-3).increment_at(2);
  for (int n = -4; n <= 4; ++n) CHECK(wide[n] == narrow[n]);

  const auto silent = NoiseStream(7, 0, 4, 1e-3).scaled(0.0).increment_at(2);
  for (double v : silent.delta_b) CHECK(v == 0.0);
  const auto doubled = NoiseStream(7, 0, 4, 1e-3).scaled(2.0).increment_at(2);
  for (int n = -4; n <= 4; ++n) CHECK(doubled[n] == Approx(2.0 * narrow[n]));
}

TEST_CASE("increment statistics") {
  const double dt = 1e-3;
  NoiseStream s(2024, 0, 1, dt);
  const int draws = 100000;
  double sum0 = 0.0, sum1 = 0.0, sq0 = 0.0, sq1 = 0.0, cross = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto inc = s.next_increment();
    sum0 += inc[0];
    sum1 += inc[1];
    sq0 += inc[0] * inc[0];
    sq1 += inc[1] * inc[1];
    cross += inc[0] * inc[1];
  }
  const double m0 = sum0 / draws, m1 = sum1 / draws;
  const double v0 = sq0 / draws - m0 * m0;
  const double v1 = sq1 / draws - m1 * m1;
  CHECK(v0 >= 0.985 * dt);
  CHECK(v0 <= 1.015 * dt);
  CHECK(v1 >= 0.985 * dt);
  CHECK(v1 <= 1.015 * dt);
  const double corr = (cross / draws - m0 * m1) / std::sqrt(v0 * v1);
  CHECK(std::abs(corr) <= 0.01);

  // Independent paths: correlation of the same mode across path ids.
  double cp = 0.0, a2 = 0.0, b2 = 0.0;
  for (std::uint64_t step = 0; step < 100000; ++step) {
    const double a = counter_gaussian(5, 0, step, 0);
    const double b = counter_gaussian(5, 1, step, 0);
    cp += a * b;
    a2 += a * a;
    b2 += b * b;
  }
  CHECK(std::abs(cp / std::sqrt(a2 * b2)) <= 0.01);
}

TEST_CASE("noise field examples") {
  const auto alpha = ScalingSequence::exponential(1.0);
  const ScaledBasis basis(alpha, 4, 32);
  auto inc = ModeIncrement::zero(4, 1e-3);

  const auto none = noise_field(inc, basis, AffineCircleMap::identity(32));
  for (double v : none.values()) CHECK(v == 0.0);

  inc[1] = 1.0;
  const auto single = noise_field(inc, basis, AffineCircleMap::identity(32));
  for (std::size_t j = 0; j < 32; ++j) CHECK(single[j] == Approx(alpha(1) * std::cos(single.theta(j))).epsilon(1e-14));

  const auto shifted = noise_field(inc, basis, AffineCircleMap::rotation(32, std::numbers::pi));
  for (std::size_t j = 0; j < 32; ++j) {
    CHECK(shifted[j] == Approx(-alpha(1) * std::cos(shifted.theta(j))).epsilon(1e-13).scale(1e-3));
  }

  auto neg = ModeIncrement::zero(4, 1e-3);
  neg[-3] = 2.0;
  const double pts[] = {0.3, 1.7};
  const auto at = noise_field_at(neg, basis, pts);
  CHECK(at[0] == Approx(-2.0 * alpha(3) * std::sin(0.9)).epsilon(1e-13));
  CHECK(at[1] == Approx(-2.0 * alpha(3) * std::sin(5.1)).epsilon(1e-13));

  // Frequencies past the re-anchoring point of the recurrence.
  const ScaledBasis wide(ScalingSequence::power_law(0.5), 100, 512);
  auto hi = ModeIncrement::zero(100, 1e-3);
  hi[97] = 1.0;
  const double far[] = {2.345};
  CHECK(noise_field_at(hi, wide, far)[0] ==
        Approx(wide.lambda()(97) * std::cos(97 * 2.345)).epsilon(1e-11).scale(1e-3));

  CHECK_THROWS_AS(noise_field(ModeIncrement::zero(3, 1e-3), basis, AffineCircleMap::identity(32)),
                  std::invalid_argument);
}
