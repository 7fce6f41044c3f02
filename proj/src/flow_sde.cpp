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

#include "circleflow/flow_sde.hpp"

#include <algorithm>
#include <cmath>

namespace circleflow {

namespace {

void require_finite(const CircleFunction& x, double t) {
  for (double v : x.values()) {
    if (!std::isfinite(v)) {
      throw NumericalError("non-finite state at t = " + std::to_string(t));
    }
  }
}

FlowState with_diagnostics(CircleFunction x, double t, bool was_stopped, const SolverConfig& cfg) {
  FlowState s;
  s.hk = hk_norm(x, cfg.k);
  s.min_deriv = min_one_plus_derivative(x);
  s.t = t;
  s.stopped = was_stopped || s.hk >= cfg.R;
  s.x = std::move(x);
  return s;
}

// F(y) = Φ_R(y) ΔW on the grid.
CircleFunction drive(const CircleFunction& y, double hk, const ModeIncrement& inc,
                     const ScaledBasis& basis, const SolverConfig& cfg) {
  if (cfg.truncate && hk > cfg.R) {
    return noise_field(inc, basis, AffineCircleMap((cfg.R / hk) * y));
  }
  return noise_field(inc, basis, AffineCircleMap(y));
}

PathSample sample_of(const FlowState& s, bool snapshot) {
  PathSample out{s.t, s.hk, s.min_deriv, s.stopped, std::nullopt};
  if (snapshot) out.snapshot = s.x;
  return out;
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  return scheme == Scheme::EulerIto ? "euler" : "heun";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "euler") return Scheme::EulerIto;
  if (name == "heun") return Scheme::HeunStratonovich;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected euler or heun)");
}

void SolverConfig::validate() const {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be non-negative");
  if (T > 0.0 && dt > T) throw std::invalid_argument("dt must not exceed T");
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (M < 4 || !is_power_of_two(M)) throw std::invalid_argument("M must be a power of two");
  if (M < 4 * static_cast<std::size_t>(N)) throw std::invalid_argument("M must be at least 4N");
}

std::uint64_t SolverConfig::step_count() const {
  return static_cast<std::uint64_t>(std::llround(T / dt));
}

FlowState FlowState::initial(const SolverConfig& cfg) {
  return with_diagnostics(CircleFunction::zero(cfg.M), 0.0, false, cfg);
}

FlowState FlowState::at(CircleFunction x, double t, const SolverConfig& cfg) {
  if (x.size() != cfg.M) throw std::invalid_argument("state grid does not match the config");
  return with_diagnostics(std::move(x), t, false, cfg);
}

double truncation_scale(const FlowState& s, const SolverConfig& cfg) {
  if (!cfg.truncate || s.hk <= cfg.R) return 1.0;
  return cfg.R / s.hk;
}

FlowState euler_step(const FlowState& s, const ModeIncrement& inc, const SolverConfig& cfg) {
  const ScaledBasis basis = cfg.noise_basis();
  CircleFunction next = s.x + drive(s.x, s.hk, inc, basis, cfg);
  require_finite(next, s.t + inc.dt);
  return with_diagnostics(std::move(next), s.t + inc.dt, s.stopped, cfg);
}

FlowState heun_step(const FlowState& s, const ModeIncrement& inc, const SolverConfig& cfg) {
  const ScaledBasis basis = cfg.noise_basis();
  const CircleFunction first = drive(s.x, s.hk, inc, basis, cfg);
  const CircleFunction predictor = s.x + first;
  const double predictor_hk = cfg.truncate ? hk_norm(predictor, cfg.k) : 0.0;
  const CircleFunction second = drive(predictor, predictor_hk, inc, basis, cfg);
  CircleFunction next = s.x + 0.5 * (first + second);
  require_finite(next, s.t + inc.dt);
  return with_diagnostics(std::move(next), s.t + inc.dt, s.stopped, cfg);
}

FlowState advance(const FlowState& s, const ModeIncrement& inc, const SolverConfig& cfg) {
  return cfg.scheme == Scheme::EulerIto ? euler_step(s, inc, cfg) : heun_step(s, inc, cfg);
}

CircleFunction ito_correction(const FlowState& s, const SolverConfig& cfg) {
  const AffineCircleMap warp(s.x);
  const std::vector<double> y = warp.grid_image();
  std::vector<double> drift(y.size(), 0.0);
  for (std::size_t j = 0; j < y.size(); ++j) {
    double sum = 0.0;
    for (int n = 1; n <= cfg.N; ++n) {
      const double arg = static_cast<double>(n) * y[j];
      const double sc = std::sin(arg) * std::cos(arg);
      const double freq = static_cast<double>(n);
      // d cos(nX̃)·dB^{(n)} and d sin(nX̃)·dB^{(-n)} contractions.
      const double from_cos = -cfg.alpha(n) * cfg.alpha(n) * freq * sc;
      const double from_sin = cfg.alpha(-n) * cfg.alpha(-n) * freq * sc;
      sum += 0.5 * (from_cos + from_sin);
    }
    drift[j] = sum;
  }
  return CircleFunction::from_grid(std::move(drift));
}

CircleFunction ito_correction_unpaired(const FlowState& s, const SolverConfig& cfg) {
  const AffineCircleMap warp(s.x);
  const std::vector<double> y = warp.grid_image();
  std::vector<double> drift(y.size(), 0.0);
  for (std::size_t j = 0; j < y.size(); ++j) {
    double sum = 0.0;
    for (int n = -cfg.N; n <= cfg.N; ++n) {
      const double a = cfg.alpha(n);
      const double arg = static_cast<double>(n) * y[j];
      const double fn = static_cast<double>(n);
      const double value = n >= 0 ? a * std::cos(arg) : a * std::sin(arg);
      const double slope = n >= 0 ? -fn * a * std::sin(arg) : fn * a * std::cos(arg);
      sum += 0.5 * slope * value;
    }
    drift[j] = sum;
  }
  return CircleFunction::from_grid(std::move(drift));
}

PathRecord simulate_path(const SolverConfig& cfg, NoiseStream stream, std::size_t record_every) {
  SimulateOptions opts;
  opts.record_every = record_every;
  return simulate_path(cfg, std::move(stream), opts);
}

PathRecord simulate_path(const SolverConfig& cfg, NoiseStream stream, const SimulateOptions& opts) {
  return simulate_from(cfg, std::move(stream), CircleFunction::zero(cfg.M), opts);
}

PathRecord simulate_from(const SolverConfig& cfg, NoiseStream stream, const CircleFunction& x0,
                         const SimulateOptions& opts) {
  cfg.validate();
  if (opts.record_every == 0) throw std::invalid_argument("record_every must be positive");
  if (opts.substeps == 0) throw std::invalid_argument("substeps must be positive");
  if (stream.cutoff() != cfg.N) throw std::invalid_argument("noise stream cutoff != config N");
  const double fine_dt = cfg.dt / static_cast<double>(opts.substeps);
  if (std::abs(stream.dt() - fine_dt) > 1e-12 * fine_dt) {
    throw std::invalid_argument("noise stream dt does not match dt / substeps");
  }

  PathRecord record;
  record.provenance = {stream.master_seed(), stream.path_id(), stream.step_index()};

  FlowState state = FlowState::at(x0, 0.0, cfg);
  record.samples.push_back(sample_of(state, opts.snapshots));
  if (state.stopped) {
    record.tau_R = 0.0;
    record.tau_step = stream.step_index();
    record.state_at_tau = state.x;
  }
  if (record.tau_R && opts.stop_at_hit) {
    record.final_state = state.x;
    return record;
  }

  const std::uint64_t steps = cfg.step_count();
  for (std::uint64_t i = 1; i <= steps; ++i) {
    const ModeIncrement inc = stream.next_increment(opts.substeps);
    const bool was_stopped = state.stopped;
    state = advance(state, inc, cfg);
    state.t = static_cast<double>(i) * cfg.dt;
    const bool crossed = state.stopped && !was_stopped;
    if (crossed) {
      record.tau_R = state.t;
      record.tau_step = stream.step_index();
      record.state_at_tau = state.x;
    }
    if (crossed || i % opts.record_every == 0 || i == steps) {
      record.samples.push_back(sample_of(state, opts.snapshots));
    }
    if (crossed && opts.stop_at_hit) break;
  }
  record.final_state = state.x;
  return record;
}

PathRecord concatenate(const PathRecord& first, NoiseStream fresh, const SolverConfig& cfg,
                       const SimulateOptions& opts) {
  if (!first.tau_R || !first.state_at_tau) {
    throw std::invalid_argument("concatenate: first segment never reached R");
  }
  const double tau = *first.tau_R;
  const CircleFunction& xi = *first.state_at_tau;
  const AffineCircleMap xi_map(xi);
  if (!xi_map.is_diffeo()) {
    throw std::invalid_argument("concatenate: state at the hitting time is not a diffeomorphism");
  }

  const auto tau_steps = static_cast<std::uint64_t>(std::llround(tau / cfg.dt));
  const std::uint64_t total = cfg.step_count();
  SolverConfig rest = cfg;
  rest.T = static_cast<double>(total > tau_steps ? total - tau_steps : 0) * cfg.dt;

  SimulateOptions restart_opts = opts;
  restart_opts.snapshots = true;
  restart_opts.stop_at_hit = false;
  const PathRecord restart = simulate_path(rest, std::move(fresh), restart_opts);

  PathRecord out;
  out.provenance = first.provenance;
  out.tau_R = first.tau_R;
  out.tau_step = first.tau_step;
  out.state_at_tau = first.state_at_tau;
  out.restart_taus = first.restart_taus;
  out.restart_taus.push_back(restart.tau_R);
  for (const PathSample& s : first.samples) {
    if (s.t <= tau) out.samples.push_back(s);
  }
  out.final_state = xi;
  for (const PathSample& s : restart.samples) {
    if (s.t <= 0.0) continue;
    CircleFunction z = xi + compose(*s.snapshot, xi_map);
    PathSample joined;
    joined.t = tau + s.t;
    joined.hk = hk_norm(z, cfg.k);
    joined.min_deriv = min_one_plus_derivative(z);
    joined.stopped = true;
    if (opts.snapshots) joined.snapshot = z;
    out.final_state = std::move(z);
    out.samples.push_back(std::move(joined));
  }
  return out;
}

FlowCheckReport flow_compose_check(const SolverConfig& cfg, NoiseStream stream,
                                   const AffineCircleMap& xi) {
  SolverConfig plain = cfg;
  plain.truncate = false;
  plain.validate();
  if (xi.size() != plain.M) throw std::invalid_argument("warp grid does not match the config");
  if (!xi.is_diffeo()) throw std::invalid_argument("flow_compose_check: warp is not a diffeomorphism");

  const std::vector<double> points = xi.grid_image();
  const CircleFunction& xi_part = xi.vector_part();
  FlowState from_id = FlowState::initial(plain);
  FlowState from_xi = FlowState::at(xi_part, 0.0, plain);

  FlowCheckReport report;
  const std::uint64_t steps = plain.step_count();
  for (std::uint64_t i = 1; i <= steps; ++i) {
    const ModeIncrement inc = stream.next_increment();
    from_id = advance(from_id, inc, plain);
    from_xi = advance(from_xi, inc, plain);
    const std::vector<double> pulled = evaluate(from_id.x, points);
    for (std::size_t j = 0; j < points.size(); ++j) {
      // Ỹ(θ) - X̃(ξ̃(θ)) = y(θ) - ξ(θ) - X(ξ̃(θ))
      const double err = std::abs(from_xi.x[j] - xi_part[j] - pulled[j]);
      report.sup_error = std::max(report.sup_error, err);
    }
    ++report.compared_steps;
  }
  return report;
}

double diffeo_radius(int k) {
  if (k < 2) throw std::invalid_argument("diffeo_radius needs k >= 2");
  return 1.0 / sobolev_embedding_constant(k, 1);
}

}  // namespace circleflow
