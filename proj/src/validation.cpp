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

#include "circleflow/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "circleflow/certificates.hpp"
#include "circleflow/faa_di_bruno.hpp"

namespace circleflow {

namespace {

// Explicit trigonometric polynomial a_0 + Σ a_n cos nx + b_n sin nx.
struct Trig {
  std::vector<double> a, b;

  double derivative(double x, int m) const {
    double s = m == 0 ? a[0] : 0.0;
    for (std::size_t n = 1; n < a.size(); ++n) {
      const double w = static_cast<double>(n);
      const double phase = w * x + m * std::numbers::pi / 2.0;
      s += std::pow(w, m) * (a[n] * std::cos(phase) + b[n] * std::sin(phase));
    }
    return s;
  }
  double operator()(double x) const { return derivative(x, 0); }
};

Trig random_trig(std::mt19937_64& rng, int modes, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Trig t;
  t.a.assign(static_cast<std::size_t>(modes) + 1, 0.0);
  t.b.assign(static_cast<std::size_t>(modes) + 1, 0.0);
  t.a[0] = u(rng);
  for (int n = 1; n <= modes; ++n) {
    t.a[static_cast<std::size_t>(n)] = u(rng) / (1.0 + n);
    t.b[static_cast<std::size_t>(n)] = u(rng) / (1.0 + n);
  }
  return t;
}

CircleFunction sampled(const Trig& t, std::size_t grid) {
  return CircleFunction::from_coefficients(grid, t.a, t.b);
}

}  // namespace

CheckResult check_bell_counts() {
  const auto& table = BellTable::shared();
  constexpr int kMax = 8;
  std::vector<std::vector<std::uint64_t>> stirling(kMax + 1, std::vector<std::uint64_t>(kMax + 1, 0));
  stirling[0][0] = 1;
  for (int n = 1; n <= kMax; ++n) {
    for (int k = 1; k <= n; ++k) stirling[n][k] = k * stirling[n - 1][k] + stirling[n - 1][k - 1];
  }
  // Bell triangle: each row starts with the last entry of the previous one.
  std::vector<std::uint64_t> bell{1};
  std::vector<std::uint64_t> row{1};
  for (int n = 1; n <= kMax; ++n) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    bell.push_back(next.front());
    row = std::move(next);
  }
  int mismatches = 0;
  for (int n = 1; n <= kMax; ++n) {
    for (int k = 1; k <= n; ++k) {
      std::uint64_t total = 0;
      for (const auto& m : table.entry(n, k)) total += m.coefficient;
      mismatches += total != stirling[n][k];
    }
    mismatches += table.expanded_term_count(n) != bell[static_cast<std::size_t>(n)];
  }
  return make_check("bell_polynomial_counts", mismatches, "==", 0.0);
}

CheckResult check_faa_di_bruno_fd(int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> where(0.0, 2.0 * std::numbers::pi);
  const double h = 1e-4;
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const Trig u = random_trig(rng, 3, 1.0);
    const Trig w = random_trig(rng, 3, 0.5);
    const double x = where(rng);
    const auto composed = [&](double t) { return u(w(t)); };
    std::vector<double> fj, gj;
    for (int i = 0; i <= 2; ++i) {
      fj.push_back(u.derivative(w(x), i));
      gj.push_back(w.derivative(x, i));
    }
    const DerivativeJet f_jet(fj), g_jet(gj);
    const double fd1 = (composed(x + h) - composed(x - h)) / (2.0 * h);
    const double fd2 = (composed(x + h) - 2.0 * composed(x) + composed(x - h)) / (h * h);
    const double d1 = compose_derivative(f_jet, g_jet, 1);
    const double d2 = compose_derivative(f_jet, g_jet, 2);
    worst = std::max(worst, std::abs(d1 - fd1) / std::max(1.0, std::abs(d1)));
    worst = std::max(worst, std::abs(d2 - fd2) / std::max(1.0, std::abs(d2)));
  }
  return make_check("faa_di_bruno_vs_finite_difference", worst, "<=", 1e-6);
}

CheckResult check_parseval(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto f = sampled(random_trig(rng, 12, 2.0), 64);
    double quad = 0.0;
    for (double v : f.values()) quad += v * v;
    quad /= static_cast<double>(f.size());
    const double spectral = l2_norm(f) * l2_norm(f);
    worst = std::max(worst, std::abs(spectral - quad) / quad);
  }
  return make_check("parseval_relative_defect", worst, "<=", 1e-10);
}

CheckResult check_sobolev_embedding(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double c = sobolev_constant(2);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto f = sampled(random_trig(rng, 16, 1.0), 128);
    const double lhs = linf_norm(derivative(f, 1));
    const double rhs = c * hk_norm(f, 2);
    if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
  }
  return make_check("sobolev_embedding_ratio", worst, "<=", 1.0);
}

CheckResult check_hs_closed_form(const ScalingSequence& alpha, int N) {
  const ScaledBasis basis(alpha, N);
  const double direct = phi_hs_norm_squared(CircleFunction::zero(4 * basis.grid_size()), basis, 2);
  const double closed = phi_hs_norm_squared_at_zero(basis, 2);
  return make_check("hs_norm_closed_form_at_zero", std::abs(direct - closed) / closed, "<=", 1e-10);
}

CheckResult check_hs_bound(const ScalingSequence& alpha, int N) {
  const ScaledBasis basis(alpha, N);
  const std::size_t grid = 4 * basis.grid_size();
  const CircleFunction fs[] = {
      CircleFunction::zero(grid),
      CircleFunction::sample(grid, [](double t) { return 0.1 * std::sin(t); }),
      CircleFunction::sample(grid, [](double t) { return 0.2 * std::cos(2.0 * t); }),
  };
  double worst = 0.0;
  for (const auto& f : fs) {
    const HsCertificate cert = hs_bound_certificate(f, 2, basis);
    worst = std::max(worst, std::isfinite(cert.actual) ? cert.actual / cert.bound : HUGE_VAL);
  }
  return make_check("hs_norm_over_bound", worst, "<=", 1.0);
}

CheckResult check_lipschitz(const ScalingSequence& alpha, int N, double R, int pairs, std::uint64_t seed) {
  const ScaledBasis basis(alpha, N);
  const std::size_t grid = 4 * basis.grid_size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    auto f = sampled(random_trig(rng, 6, 1.0), grid);
    auto g = sampled(random_trig(rng, 6, 1.0), grid);
    f *= radius(rng) * R / hk_norm(f, 2);
    g *= radius(rng) * R / hk_norm(g, 2);
    const LipschitzCertificate cert = lipschitz_certificate(f, g, 2, R, basis);
    worst = std::max(worst, cert.ratio / cert.C_R);
  }
  return make_check("lipschitz_ratio_over_constant", worst, "<=", 1.0);
}

CheckResult check_q_trace(int N) {
  const auto pair = BasisPair::from_alpha(ScalingSequence::exponential(1.0));
  const double limit = 1.0 + std::numbers::pi * std::numbers::pi / 3.0;
  const double gap = std::abs(q_lambda_trace(pair, N) - limit);
  return make_check("q_lambda_trace_tail", gap, "<=", 2.0 / N);
}

CheckResult check_rapid_decay(const ScalingSequence& alpha) {
  return make_check("alpha_rapidly_decreasing", verify_rapid_decay(alpha, 6, 400) ? 1.0 : 0.0, "==", 1.0);
}

CheckResult check_noise_variance(std::uint64_t seed) {
  const double dt = 1e-3;
  NoiseStream s(seed, 0, 0, dt);
  double sum = 0.0, sq = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double v = s.next_increment()[0];
    sum += v;
    sq += v * v;
  }
  const double mean = sum / draws;
  const double var = sq / draws - mean * mean;
  return make_check("noise_variance_relative_error", std::abs(var / dt - 1.0), "<=", 0.015);
}

CheckResult check_noise_correlation(std::uint64_t seed) {
  NoiseStream s(seed, 1, 1, 1.0);
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto inc = s.next_increment();
    const double a = inc[-1], b = inc[1];
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
  }
  const double n = draws;
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
  return make_check("noise_mode_correlation", std::abs(corr), "<=", 0.01);
}

CheckResult check_ito_correction(const SolverConfig& cfg, int states, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < states; ++i) {
    const auto x = sampled(random_trig(rng, 8, 0.5), cfg.M);
    const auto drift = ito_correction(FlowState::at(x, 0.0, cfg), cfg);
    for (double v : drift.values()) worst = std::max(worst, std::abs(v));
  }
  return make_check("ito_correction_max_abs", worst, "==", 0.0);
}

std::vector<CheckResult> check_heun_step_rate(const SolverConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const FlowState s = FlowState::at(sampled(random_trig(rng, 5, 0.05), cfg.M), 0.0, cfg);
  const ModeIncrement zeta = NoiseStream(seed, 0, cfg.N, 1.0).increment_at(0);
  const auto gap = [&](double dt) {
    ModeIncrement inc = zeta;
    inc.dt = dt;
    for (double& v : inc.delta_b) v *= std::sqrt(dt);
    const auto a = euler_step(s, inc, cfg);
    const auto b = heun_step(s, inc, cfg);
    double worst = 0.0;
    for (std::size_t j = 0; j < a.x.size(); ++j) worst = std::max(worst, std::abs(a.x[j] - b.x[j]));
    return worst;
  };
  const double g1 = gap(4e-3), g2 = gap(2e-3), g3 = gap(1e-3);
  const double r1 = g1 / g2, r2 = g2 / g3;
  return {make_check("heun_euler_step_ratio_min", std::min(r1, r2), ">=", 1.5),
          make_check("heun_euler_step_ratio_max", std::max(r1, r2), "<=", 2.5)};
}

std::vector<CheckResult> check_flow(const FlowCheckConfig& fc, const SolverConfig& base, std::uint64_t seed) {
  SolverConfig cfg = base;
  cfg.N = fc.N;
  cfg.M = fc.M;
  cfg.T = fc.T;
  if (cfg.T > 0.0 && cfg.dt > cfg.T) cfg.dt = cfg.T;
  double identity = 0.0, rotation = 0.0, wobble = 0.0;
  const AffineCircleMap id = AffineCircleMap::identity(cfg.M);
  const AffineCircleMap rot = AffineCircleMap::rotation(cfg.M, fc.rotation);
  const AffineCircleMap wob(CircleFunction::sample(cfg.M, [&](double t) { return fc.wobble * std::sin(t); }));
  for (std::size_t p = 0; p < fc.paths; ++p) {
    const NoiseStream stream(seed, p, cfg.N, cfg.dt);
    identity = std::max(identity, flow_compose_check(cfg, stream, id).sup_error);
    rotation = std::max(rotation, flow_compose_check(cfg, stream, rot).sup_error);
    wobble = std::max(wobble, flow_compose_check(cfg, stream, wob).sup_error);
  }
  return {make_check("flow_property_identity", identity, "<=", 1e-12),
          make_check("flow_property_rotation", rotation, "<=", 1e-10),
          make_check("flow_property_wobble", wobble, "<=", 1e-4)};
}

CheckResult check_diffeo_preservation(const SolverConfig& base, std::uint64_t seed, std::size_t n_paths,
                                      unsigned threads) {
  SolverConfig cfg = base;
  cfg.R = diffeo_radius(cfg.k);
  cfg.truncate = true;
  SimulateOptions opts;
  const EnsembleResult ens = run_ensemble(cfg, seed, n_paths, opts, threads);
  std::size_t good = 0;
  for (const PathRecord& path : ens.paths) {
    bool ok = true;
    for (const PathSample& s : path.samples) {
      if (path.tau_R && s.t > *path.tau_R) break;
      ok = ok && s.min_deriv > 0.0;
    }
    good += ok;
  }
  return make_check("diffeo_preserved_fraction", static_cast<double>(good) / static_cast<double>(n_paths),
                    ">=", 1.0);
}

CheckResult check_determinism(const SolverConfig& cfg, std::uint64_t seed) {
  SimulateOptions opts;
  opts.snapshots = false;
  const PathRecord a = simulate_path(cfg, NoiseStream(seed, 3, cfg.N, cfg.dt), opts);
  const PathRecord b = simulate_path(cfg, NoiseStream(seed, 3, cfg.N, cfg.dt), opts);
  bool same = a.samples.size() == b.samples.size() && a.tau_R == b.tau_R &&
              std::ranges::equal(a.final_state.values(), b.final_state.values());
  for (std::size_t i = 0; same && i < a.samples.size(); ++i) {
    same = a.samples[i].t == b.samples[i].t && a.samples[i].hk == b.samples[i].hk &&
           a.samples[i].min_deriv == b.samples[i].min_deriv;
  }
  return make_check("path_replay_identical", same ? 1.0 : 0.0, "==", 1.0);
}

CheckResult check_concatenation(const SolverConfig& base, std::uint64_t seed) {
  SolverConfig cfg = base;
  cfg.R = std::min(cfg.R, 0.05);
  const auto err = concatenation_consistency(cfg, seed, 0);
  return make_check("concatenation_vs_direct", err ? *err : HUGE_VAL, "<=", 1e-4);
}

CheckResult check_initial_record(const SolverConfig& base) {
  SolverConfig cfg = base;
  cfg.T = 0.0;
  const PathRecord rec = simulate_path(cfg, NoiseStream(0, 0, cfg.N, cfg.dt), 1);
  const bool ok = rec.samples.size() == 1 && rec.samples[0].t == 0.0 && rec.samples[0].hk == 0.0 &&
                  rec.samples[0].min_deriv == 1.0 && !rec.tau_R;
  return make_check("initial_record_identity", ok ? 1.0 : 0.0, "==", 1.0);
}

std::vector<CheckResult> check_hitting_times(const std::vector<HittingRow>& rows) {
  double min_step = std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const HittingRow& a = rows[i];
    const HittingRow& b = rows[i + 1];
    min_step = std::min(min_step, b.mean - a.mean);
    min_gap = std::min(min_gap, (b.mean - b.stderr_) - (a.mean + a.stderr_));
  }
  std::vector<CheckResult> out;
  if (rows.size() < 2) return out;
  out.push_back(make_check("hitting_mean_increasing", min_step, ">", 0.0));
  out.push_back(make_check("hitting_stderr_bars_disjoint", min_gap, ">", 0.0));
  double worst = std::numeric_limits<double>::infinity();
  for (const HittingRow& a : rows) {
    for (const HittingRow& b : rows) {
      if (std::abs(b.R - 2.0 * a.R) > 1e-12 * b.R) continue;
      const double slack = 2.0 * std::sqrt(b.stderr_ * b.stderr_ + 4.0 * a.stderr_ * a.stderr_);
      worst = std::min(worst, b.mean - 2.0 * a.mean + slack);
    }
  }
  if (std::isfinite(worst)) out.push_back(make_check("hitting_superadditive", worst, ">=", 0.0));
  return out;
}

std::vector<CheckResult> validation_suite(const RunConfig& config) {
  const SolverConfig& cfg = config.solver;
  const std::uint64_t seed = config.master_seed;
  std::vector<CheckResult> out;
  out.push_back(check_bell_counts());
  out.push_back(check_faa_di_bruno_fd(100, seed));
  out.push_back(check_parseval(1000, seed));
  out.push_back(check_sobolev_embedding(1000, seed));
  out.push_back(check_hs_closed_form(cfg.alpha, 32));
  out.push_back(check_hs_bound(cfg.alpha, 32));
  out.push_back(check_lipschitz(cfg.alpha, 16, 0.5, 20, seed));
  out.push_back(check_q_trace(cfg.N));
  out.push_back(check_rapid_decay(cfg.alpha));
  out.push_back(check_noise_variance(seed));
  out.push_back(check_noise_correlation(seed));
  out.push_back(check_ito_correction(cfg, 100, seed));
  for (auto& c : check_heun_step_rate(cfg, seed)) out.push_back(std::move(c));
  for (auto& c : check_flow(config.flow_check, cfg, seed)) out.push_back(std::move(c));
  out.push_back(check_diffeo_preservation(cfg, seed, config.n_paths, config.threads));
  out.push_back(check_determinism(cfg, seed));
  out.push_back(check_concatenation(cfg, seed));
  out.push_back(check_initial_record(cfg));
  return out;
}

}  // namespace circleflow
