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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "circleflow/flow_sde.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace circleflow;
using doctest::Approx;

namespace {

SolverConfig small_config() {
  SolverConfig cfg;
  cfg.N = 8;
  cfg.M = 64;
  cfg.dt = 1e-3;
  cfg.T = 0.05;
  return cfg;
}

bool same_values(const CircleFunction& a, const CircleFunction& b) {
  return std::ranges::equal(a.values(), b.values());
}

double sup_diff(const CircleFunction& a, const CircleFunction& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

CircleFunction random_state(std::mt19937_64& rng, std::size_t grid, double scale) {
  const auto p = oracle::random_trig_poly(rng, 5, scale);
  return CircleFunction::sample(grid, [&](double x) { return p(x); });
}

}  // namespace

TEST_CASE("config validation and scheme names") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.step_count() == 1000);
  cfg.M = 32;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.R = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.dt = 2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(scheme_from_name("heun") == Scheme::HeunStratonovich);
  CHECK(scheme_name(Scheme::EulerIto) == "euler");
  CHECK_THROWS_AS(scheme_from_name("milstein"), std::invalid_argument);
}

TEST_CASE("truncation scale") {
  SolverConfig cfg;
  cfg.R = 0.4;
  FlowState s = FlowState::initial(cfg);
  s.hk = 0.2;
  CHECK(truncation_scale(s, cfg) == 1.0);
  s.hk = 0.4;
  CHECK(truncation_scale(s, cfg) == 1.0);
  s.hk = 0.8;
  CHECK(truncation_scale(s, cfg) == 0.5);
  cfg.truncate = false;
  CHECK(truncation_scale(s, cfg) == 1.0);
}

TEST_CASE("Euler step examples") {
  const SolverConfig cfg = small_config();
  const FlowState s0 = FlowState::initial(cfg);
  CHECK(s0.hk == 0.0);
  CHECK(s0.min_deriv == 1.0);

  const auto still = euler_step(s0, ModeIncrement::zero(cfg.N, cfg.dt), cfg);
  CHECK(still.t == Approx(cfg.dt));
  for (double v : still.x.values()) CHECK(v == 0.0);

  const double h = 0.03;
  auto rot = ModeIncrement::zero(cfg.N, cfg.dt);
  rot[0] = h;
  const auto rotated = euler_step(s0, rot, cfg);
  for (double v : rotated.x.values()) CHECK(v == Approx(cfg.alpha(0) * h).epsilon(1e-15));

  auto wave = ModeIncrement::zero(cfg.N, cfg.dt);
  wave[1] = h;
  const auto waved = euler_step(s0, wave, cfg);
  for (std::size_t j = 0; j < cfg.M; ++j) {
    CHECK(waved.x[j] == Approx(cfg.alpha(1) * h * std::cos(waved.x.theta(j))).epsilon(1e-14).scale(1e-6));
  }
}

TEST_CASE("the truncated coefficient warps with the rescaled state") {
  SolverConfig cfg = small_config();
  cfg.R = 0.1;
  const auto x = CircleFunction::sample(cfg.M, [](double t) { return 0.2 * std::sin(t) + 0.05 * std::cos(3 * t); });
  const FlowState s = FlowState::at(x, 0.0, cfg);
  REQUIRE(s.hk > cfg.R);
  CHECK(s.stopped);
  const double scale = truncation_scale(s, cfg);
  CHECK(scale == Approx(cfg.R / s.hk));

  auto inc = ModeIncrement::zero(cfg.N, cfg.dt);
  inc[2] = 0.01;
  inc[-1] = -0.02;
  const auto next = euler_step(s, inc, cfg);
  for (std::size_t j = 0; j < cfg.M; ++j) {
    const double y = x.theta(j) + scale * x[j];
    const double field = 0.01 * cfg.alpha(2) * std::cos(2 * y) - 0.02 * cfg.alpha(1) * std::sin(-y);
    CHECK(next.x[j] == Approx(x[j] + field).epsilon(1e-14));
  }
  CHECK(next.stopped);
}

TEST_CASE("Heun step examples") {
  const SolverConfig cfg = small_config();
  std::mt19937_64 rng(31);
  const FlowState s = FlowState::at(random_state(rng, cfg.M, 0.02), 0.0, cfg);

  const auto still = heun_step(s, ModeIncrement::zero(cfg.N, cfg.dt), cfg);
  CHECK(sup_diff(still.x, s.x) == 0.0);

  auto rot = ModeIncrement::zero(cfg.N, cfg.dt);
  rot[0] = 0.04;
  CHECK(sup_diff(heun_step(s, rot, cfg).x, euler_step(s, rot, cfg).x) == 0.0);

  // One step from the same state with increments √dt·ζ: |Heun - Euler| = O(dt).
  NoiseStream unit(99, 0, cfg.N, 1.0);
  const auto zeta = unit.increment_at(0);
  const auto gap = [&](double dt) {
    ModeIncrement inc = zeta;
    inc.dt = dt;
    for (double& v : inc.delta_b) v *= std::sqrt(dt);
    return sup_diff(heun_step(s, inc, cfg).x, euler_step(s, inc, cfg).x);
  };
  const double g1 = gap(4e-3), g2 = gap(2e-3), g3 = gap(1e-3);
  CHECK(g1 / g2 >= 1.5);
  CHECK(g1 / g2 <= 2.5);
  CHECK(g2 / g3 >= 1.5);
  CHECK(g2 / g3 <= 2.5);
}

TEST_CASE("Stratonovich-to-Ito correction vanishes") {
  SolverConfig cfg = small_config();
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const FlowState s = FlowState::at(random_state(rng, cfg.M, 0.3), 0.0, cfg);
    const auto paired = ito_correction(s, cfg);
    const auto unpaired = ito_correction_unpaired(s, cfg);
    for (double v : paired.values()) CHECK(v == 0.0);
    for (double v : unpaired.values()) CHECK(std::abs(v) < 1e-13);
  }
}

TEST_CASE("simulate_path bookkeeping") {
  SolverConfig cfg = small_config();

  SolverConfig zero_horizon = cfg;
  zero_horizon.T = 0.0;
  const auto empty = simulate_path(zero_horizon, NoiseStream(1, 0, cfg.N, cfg.dt), 1);
  REQUIRE(empty.samples.size() == 1);
  CHECK(empty.samples[0].t == 0.0);
  CHECK(empty.samples[0].hk == 0.0);
  CHECK(empty.samples[0].min_deriv == 1.0);
  CHECK_FALSE(empty.tau_R);

  SolverConfig calm = cfg;
  calm.T = 0.5;
  calm.R = 100.0;
  const auto quiet = simulate_path(calm, NoiseStream(2, 0, cfg.N, cfg.dt), 50);
  CHECK_FALSE(quiet.tau_R);
  CHECK(quiet.samples.size() == 11);
  CHECK(quiet.samples.back().t == Approx(0.5));

  SolverConfig tight = cfg;
  tight.R = 0.02;
  tight.T = 0.2;
  const auto a = simulate_path(tight, NoiseStream(3, 7, cfg.N, cfg.dt), 10);
  const auto b = simulate_path(tight, NoiseStream(3, 7, cfg.N, cfg.dt), 10);
  REQUIRE(a.tau_R);
  CHECK(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].t == b.samples[i].t);
    CHECK(a.samples[i].hk == b.samples[i].hk);
    CHECK(a.samples[i].min_deriv == b.samples[i].min_deriv);
  }
  CHECK(same_values(a.final_state, b.final_state));
  CHECK(a.provenance.master_seed == 3);
  CHECK(a.provenance.path_id == 7);

  bool seen = false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (i > 0) CHECK(a.samples[i].t > a.samples[i - 1].t);
    if (a.samples[i].stopped && !seen) {
      seen = true;
      CHECK(a.samples[i].t == *a.tau_R);
      CHECK(a.samples[i].hk >= tight.R);
    }
    if (seen) CHECK(a.samples[i].stopped);
    if (!seen) CHECK(a.samples[i].hk < tight.R);
  }
  CHECK(*a.tau_step == static_cast<std::uint64_t>(std::llround(*a.tau_R / tight.dt)));

  SimulateOptions early;
  early.stop_at_hit = true;
  const auto cut = simulate_path(tight, NoiseStream(3, 7, cfg.N, cfg.dt), early);
  CHECK(cut.samples.back().t == *a.tau_R);
  CHECK(same_values(cut.final_state, *a.state_at_tau));
}

TEST_CASE("substeps coarsen the same Brownian path") {
  SolverConfig cfg = small_config();
  cfg.dt = 2e-3;
  cfg.T = 0.02;
  SimulateOptions opts;
  opts.substeps = 2;
  const auto coarse = simulate_path(cfg, NoiseStream(4, 0, cfg.N, 1e-3), opts);
  CHECK(coarse.samples.back().t == Approx(0.02));
  CHECK_THROWS_AS(simulate_path(cfg, NoiseStream(4, 0, cfg.N, 1e-3), 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_path(cfg, NoiseStream(4, 0, cfg.N + 1, 2e-3), 1), std::invalid_argument);

  // With substeps 1 and a 2e-3 stream, the first solver step sees a different draw.
  const auto direct = simulate_path(cfg, NoiseStream(4, 0, cfg.N, 2e-3), 1);
  CHECK_FALSE(same_values(direct.final_state, coarse.final_state));
}

TEST_CASE("concatenation") {
  SolverConfig cfg = small_config();
  cfg.M = 256;
  cfg.R = 0.05;
  cfg.T = 0.3;
  cfg.truncate = false;
  SimulateOptions opts;
  opts.snapshots = true;
  NoiseStream stream(11, 2, cfg.N, cfg.dt);
  const auto direct = simulate_path(cfg, stream, opts);
  REQUIRE(direct.tau_R);
  const CircleFunction& xi = *direct.state_at_tau;

  const auto frozen = concatenate(direct, stream.segment_from(*direct.tau_step).scaled(0.0), cfg, opts);
  CHECK(same_values(frozen.final_state, xi));
  CHECK(frozen.samples.back().t == Approx(cfg.T));
  CHECK(frozen.restart_taus.size() == 1);
  CHECK_FALSE(frozen.restart_taus[0]);

  const auto joined = concatenate(direct, stream.segment_from(*direct.tau_step), cfg, opts);
  REQUIRE(joined.samples.size() == direct.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < joined.samples.size(); ++i) {
    CHECK(joined.samples[i].t == Approx(direct.samples[i].t));
    if (joined.samples[i].snapshot) {
      worst = std::max(worst, sup_diff(*joined.samples[i].snapshot, *direct.samples[i].snapshot));
    }
  }
  CHECK(worst <= 1e-4);

  SolverConfig calm = cfg;
  calm.R = 100.0;
  const auto never = simulate_path(calm, stream, opts);
  CHECK_THROWS_AS(concatenate(never, stream, calm, opts), std::invalid_argument);
}

TEST_CASE("flow composition check") {
  SolverConfig cfg = small_config();
  cfg.M = 256;
  cfg.T = 0.1;
  const NoiseStream stream(5, 0, cfg.N, cfg.dt);
  CHECK(flow_compose_check(cfg, stream, AffineCircleMap::identity(cfg.M)).sup_error <= 1e-12);
  const auto rot = flow_compose_check(cfg, stream, AffineCircleMap::rotation(cfg.M, std::numbers::pi));
  CHECK(rot.sup_error <= 1e-10);
  CHECK(rot.compared_steps == 100);
  const AffineCircleMap wobble(CircleFunction::sample(cfg.M, [](double t) { return 0.1 * std::sin(t); }));
  CHECK(flow_compose_check(cfg, stream, wobble).sup_error <= 1e-4);
  const AffineCircleMap fold(CircleFunction::sample(cfg.M, [](double t) { return 1.5 * std::sin(t); }));
  CHECK_THROWS_AS(flow_compose_check(cfg, stream, fold), std::invalid_argument);
}

TEST_CASE("diffeomorphism radius") {
  const double r = diffeo_radius(2);
  CHECK(std::isfinite(r));
  CHECK(r > 0.3);
  CHECK(r < 1.0);
  CHECK_THROWS_AS(diffeo_radius(1), std::invalid_argument);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    auto f = random_state(rng, 128, 1.0);
    f *= (u(rng) * r) / hk_norm(f, 2);
    REQUIRE(hk_norm(f, 2) < r);
    CHECK(min_one_plus_derivative(f) > 0.0);
  }
  auto bump = CircleFunction::sample(128, [](double t) { return std::exp(std::cos(t)) - std::cyl_bessel_i(0.0, 1.0); });
  bump *= 0.99 * r / hk_norm(bump, 2);
  CHECK(min_one_plus_derivative(bump) > 0.0);
}
