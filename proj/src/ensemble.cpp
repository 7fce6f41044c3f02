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

#include "circleflow/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace circleflow {

namespace {

std::uint64_t step_of(double t, double dt) {
  return static_cast<std::uint64_t>(std::llround(t / dt));
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

// Least-squares slope of y on x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

double sup_diff(const CircleFunction& a, const CircleFunction& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

EnsembleResult run_ensemble(const SolverConfig& cfg, std::uint64_t master_seed, std::size_t n_paths,
                            const SimulateOptions& opts, unsigned threads) {
  cfg.validate();
  EnsembleResult out;
  out.solver = cfg;
  out.master_seed = master_seed;
  out.record_every = opts.record_every;
  out.paths.resize(n_paths);
  const double fine_dt = cfg.dt / static_cast<double>(opts.substeps);
  parallel_for(n_paths, threads, [&](std::size_t id) {
    out.paths[id] = simulate_path(cfg, NoiseStream(master_seed, id, cfg.N, fine_dt), opts);
  });
  return out;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SpectralDecayFit fit_spectral_decay(const std::vector<CircleFunction>& states, int modes) {
  SpectralDecayFit fit;
  if (states.empty() || modes < 2) return fit;
  std::vector<double> n_values, log_n, log_amp;
  for (int n = 1; n <= modes; ++n) {
    double amp = 0.0;
    std::size_t used = 0;
    for (const auto& s : states) {
      const auto& c = s.coefficients();
      if (static_cast<std::size_t>(n) >= c.cos.size()) continue;
      amp += std::hypot(c.cos[static_cast<std::size_t>(n)], c.sin[static_cast<std::size_t>(n)]);
      ++used;
    }
    if (used == 0) continue;
    amp /= static_cast<double>(used);
    if (!(amp > 0.0)) continue;
    n_values.push_back(n);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_amp.push_back(std::log(amp));
  }
  if (n_values.size() < 2) return fit;
  fit.modes = static_cast<int>(n_values.size());
  fit.exponential_rate = -slope(n_values, log_amp);
  fit.power_exponent = -slope(log_n, log_amp);
  return fit;
}

CheckResult make_check(std::string name, double measured, std::string relation, double threshold) {
  bool ok = false;
  if (relation == "<=") ok = measured <= threshold;
  else if (relation == "<") ok = measured < threshold;
  else if (relation == ">=") ok = measured >= threshold;
  else if (relation == ">") ok = measured > threshold;
  else if (relation == "==") ok = measured == threshold;
  else throw std::invalid_argument("unknown check relation '" + relation + "'");
  if (!std::isfinite(measured)) ok = false;
  return {std::move(name), measured, threshold, std::move(relation), ok};
}

bool EnsembleSummary::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

EnsembleSummary summarize(const EnsembleResult& ens, std::size_t stride) {
  const SolverConfig& cfg = ens.solver;
  if (stride == 0) stride = ens.record_every;
  const std::uint64_t steps = cfg.step_count();
  EnsembleSummary out;
  out.n_paths = ens.paths.size();

  std::map<std::uint64_t, std::pair<std::vector<double>, std::vector<double>>> by_step;
  std::size_t diffeo_ok = 0;
  std::size_t non_finite = 0;
  std::vector<CircleFunction> finals;
  for (const PathRecord& path : ens.paths) {
    out.tau_R.push_back(path.tau_R);
    bool ok = true;
    for (const PathSample& s : path.samples) {
      const std::uint64_t step = step_of(s.t, cfg.dt);
      if (!std::isfinite(s.hk) || !std::isfinite(s.min_deriv)) ++non_finite;
      if ((!path.tau_R || s.t <= *path.tau_R) && !(s.min_deriv > 0.0)) ok = false;
      if (step % stride != 0 && step != steps) continue;
      auto& slot = by_step[step];
      slot.first.push_back(s.min_deriv);
      slot.second.push_back(s.hk);
    }
    if (ok) ++diffeo_ok;
    finals.push_back(path.final_state);
  }

  bool monotone = true;
  for (const auto& [step, values] : by_step) {
    const double t = static_cast<double>(step) * cfg.dt;
    out.min_deriv.t.push_back(t);
    out.hk.t.push_back(t);
    const auto push = [&](QuantileBand& band, const std::vector<double>& v) {
      band.q05.push_back(quantile(v, 0.05));
      band.q50.push_back(quantile(v, 0.50));
      band.q95.push_back(quantile(v, 0.95));
      monotone = monotone && band.q05.back() <= band.q50.back() && band.q50.back() <= band.q95.back();
    };
    push(out.min_deriv, values.first);
    push(out.hk, values.second);
  }
  out.decay = fit_spectral_decay(finals, cfg.N);

  out.checks.push_back(make_check("path_count", static_cast<double>(out.tau_R.size()), "==",
                                  static_cast<double>(out.n_paths)));
  out.checks.push_back(make_check("non_finite_samples", static_cast<double>(non_finite), "==", 0.0));
  out.checks.push_back(make_check("quantiles_monotone", monotone ? 1.0 : 0.0, "==", 1.0));
  if (cfg.k >= 2 && cfg.R <= diffeo_radius(cfg.k) && out.n_paths > 0) {
    out.checks.push_back(make_check("diffeo_before_tau_fraction",
                                    static_cast<double>(diffeo_ok) / static_cast<double>(out.n_paths),
                                    ">=", 1.0));
  }
  return out;
}

std::vector<HittingRow> hitting_time_stats(const EnsembleResult& ens, const std::vector<double>& R_grid,
                                           double horizon) {
  if (ens.record_every != 1) {
    throw std::invalid_argument("hitting_time_stats needs an ensemble recorded at every step");
  }
  // grid times are step·dt, which can round just past a horizon on the grid
  const double cutoff = horizon + 1e-9 * ens.solver.dt;
  std::vector<HittingRow> rows;
  for (double R : R_grid) {
    HittingRow row;
    row.R = R;
    row.n_paths = ens.paths.size();
    std::vector<double> taus;
    for (const PathRecord& path : ens.paths) {
      double tau = horizon;
      bool hit = false;
      for (const PathSample& s : path.samples) {
        if (s.t > cutoff) break;
        if (s.hk >= R) {
          tau = std::min(s.t, horizon);
          hit = true;
          break;
        }
      }
      if (!hit) ++row.n_censored;
      taus.push_back(tau);
    }
    row.mean = mean_of(taus);
    row.stderr_ = standard_error(taus);
    row.lower_bound = row.n_censored > 0;
    rows.push_back(row);
  }
  return rows;
}

EnsembleResult hitting_time_ensemble(const RunConfig& config) {
  SolverConfig cfg = config.solver;
  cfg.R = *std::max_element(config.hitting.R_grid.begin(), config.hitting.R_grid.end());
  cfg.T = config.hitting.T;
  SimulateOptions opts;
  opts.record_every = 1;
  opts.stop_at_hit = true;
  return run_ensemble(cfg, config.master_seed, config.n_paths, opts, config.threads);
}

double kolmogorov_survival(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < 1.0) {
    // P(K ≤ x) = √(2π)/x Σ_{j≥1} exp(-(2j-1)²π²/(8x²)).
    double cdf = 0.0;
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    for (int j = 1; j <= 50; ++j) {
      const double odd = 2.0 * j - 1.0;
      cdf += std::exp(-odd * odd * c);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 50; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1) ? term : -term;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double en = std::sqrt(n * m / (n + m));
  return {d, kolmogorov_survival((en + 0.12 + 0.11 / en) * d)};
}

ContrastReport contrast_h32(const RunConfig& config) {
  const ContrastConfig& cc = config.contrast;
  const auto run_arm = [&](const ScalingSequence& alpha) {
    ContrastArm arm;
    arm.family = alpha.describe();
    std::vector<double> path_min;
    for (int pass = 0; pass < 2; ++pass) {
      SolverConfig cfg = config.solver;
      cfg.k = cc.k;
      cfg.N = pass == 0 ? cc.N_low : cc.N_high;
      cfg.M = cc.M;
      cfg.T = cc.T;
      cfg.alpha = alpha;
      cfg.truncate = false;
      if (cfg.T > 0.0 && cfg.dt > cfg.T) cfg.dt = cfg.T;
      cfg.validate();
      std::vector<double> norms(config.n_paths);
      std::vector<double> mins(config.n_paths);
      SimulateOptions opts;
      opts.record_every = config.record_every;
      parallel_for(config.n_paths, config.threads, [&](std::size_t id) {
        const NoiseStream stream = NoiseStream(config.master_seed, id, cfg.N, cfg.dt).scaled(cc.amplitude);
        const PathRecord rec = simulate_path(cfg, stream, opts);
        norms[id] = hk_norm(rec.final_state, cc.k);
        double lowest = 1.0;
        for (const PathSample& s : rec.samples) lowest = std::min(lowest, s.min_deriv);
        mins[id] = lowest;
      });
      (pass == 0 ? arm.mean_low : arm.mean_high) = mean_of(norms);
      if (pass == 1) path_min = mins;
    }
    arm.ratio = (arm.mean_low == 0.0 && arm.mean_high == 0.0) ? 1.0 : arm.mean_high / arm.mean_low;
    arm.min_deriv_q05 = quantile(path_min, 0.05);
    arm.min_deriv_q50 = quantile(path_min, 0.50);
    arm.min_deriv_q95 = quantile(path_min, 0.95);
    return arm;
  };
  ContrastReport report;
  report.in_class = run_arm(cc.in_class);
  report.out_of_class = run_arm(cc.out_of_class);
  if (cc.amplitude == 0.0) {
    report.checks.push_back(make_check("contrast_zero_noise_in_class_ratio", report.in_class.ratio, "==", 1.0));
    report.checks.push_back(make_check("contrast_zero_noise_out_of_class_ratio", report.out_of_class.ratio, "==", 1.0));
  } else {
    report.checks.push_back(make_check("contrast_in_class_ratio", report.in_class.ratio, "<", 1.05));
    report.checks.push_back(make_check("contrast_out_of_class_ratio", report.out_of_class.ratio, ">", 1.20));
  }
  return report;
}

ConcatenationStats concatenation_hitting_times(const SolverConfig& cfg, std::uint64_t master_seed,
                                               std::size_t n_paths, unsigned threads) {
  cfg.validate();
  ConcatenationStats out;
  out.first.assign(n_paths, cfg.T);
  out.restart.assign(n_paths, cfg.T);
  std::vector<char> first_hit(n_paths, 0), restart_hit(n_paths, 0);
  SimulateOptions opts;
  opts.stop_at_hit = true;
  opts.record_every = std::max<std::uint64_t>(1, cfg.step_count());
  parallel_for(n_paths, threads, [&](std::size_t id) {
    const NoiseStream stream(master_seed, id, cfg.N, cfg.dt);
    const PathRecord first = simulate_path(cfg, stream, opts);
    std::uint64_t resume = cfg.step_count();
    if (first.tau_R) {
      out.first[id] = *first.tau_R;
      first_hit[id] = 1;
      resume = *first.tau_step;
    }
    const PathRecord again = simulate_path(cfg, stream.segment_from(resume), opts);
    if (again.tau_R) {
      out.restart[id] = *again.tau_R;
      restart_hit[id] = 1;
    }
  });
  for (std::size_t i = 0; i < n_paths; ++i) {
    out.censored_first += first_hit[i] ? 0 : 1;
    out.censored_restart += restart_hit[i] ? 0 : 1;
  }
  out.ks = ks_two_sample(out.first, out.restart);
  return out;
}

std::optional<double> concatenation_consistency(const SolverConfig& cfg, std::uint64_t master_seed,
                                                std::uint64_t path_id) {
  SolverConfig plain = cfg;
  plain.truncate = false;
  SimulateOptions opts;
  opts.snapshots = true;
  const NoiseStream stream(master_seed, path_id, plain.N, plain.dt);
  const PathRecord direct = simulate_path(plain, stream, opts);
  if (!direct.tau_R) return std::nullopt;
  const PathRecord joined = concatenate(direct, stream.segment_from(*direct.tau_step), plain, opts);
  std::map<std::uint64_t, const CircleFunction*> direct_at;
  for (const PathSample& s : direct.samples) direct_at[step_of(s.t, plain.dt)] = &*s.snapshot;
  double worst = 0.0;
  for (const PathSample& s : joined.samples) {
    if (!s.snapshot) continue;
    const auto it = direct_at.find(step_of(s.t, plain.dt));
    if (it == direct_at.end()) continue;
    worst = std::max(worst, sup_diff(*s.snapshot, *it->second));
  }
  return worst;
}

double euler_heun_gap(const SolverConfig& cfg, std::uint64_t master_seed, std::uint64_t path_id,
                      double fine_dt, std::uint64_t substeps, double sample_every) {
  cfg.validate();
  if (std::abs(fine_dt * static_cast<double>(substeps) - cfg.dt) > 1e-12 * cfg.dt) {
    throw std::invalid_argument("euler_heun_gap: dt must equal fine_dt * substeps");
  }
  const auto stride = static_cast<std::uint64_t>(std::llround(sample_every / cfg.dt));
  if (stride == 0) throw std::invalid_argument("euler_heun_gap: sample_every below dt");
  SolverConfig euler = cfg, heun = cfg;
  euler.scheme = Scheme::EulerIto;
  heun.scheme = Scheme::HeunStratonovich;
  NoiseStream stream(master_seed, path_id, cfg.N, fine_dt);
  FlowState a = FlowState::initial(euler);
  FlowState b = FlowState::initial(heun);
  double worst = 0.0;
  const std::uint64_t steps = cfg.step_count();
  for (std::uint64_t i = 1; i <= steps; ++i) {
    const ModeIncrement inc = stream.next_increment(substeps);
    a = euler_step(a, inc, euler);
    b = heun_step(b, inc, heun);
    if (i % stride == 0) worst = std::max(worst, sup_diff(a.x, b.x));
  }
  return worst;
}

}  // namespace circleflow
