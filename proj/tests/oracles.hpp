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

// Test-only reference computations. Nothing here calls into the spectral
// machinery it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Band-limited trigonometric polynomial with explicit coefficients.
struct TrigPoly {
  std::vector<double> a;  // a[0..K]
  std::vector<double> b;  // b[0..K], b[0] unused

  double operator()(double x) const {
    double s = a[0];
    for (std::size_t n = 1; n < a.size(); ++n) {
      s += a[n] * std::cos(static_cast<double>(n) * x) + b[n] * std::sin(static_cast<double>(n) * x);
    }
    return s;
  }

  /// m-th derivative at x, summed term by term.
  double derivative(double x, int m) const {
    if (m == 0) return (*this)(x);
    double s = 0.0;
    for (std::size_t n = 1; n < a.size(); ++n) {
      const double w = static_cast<double>(n);
      const double phase = w * x + m * std::numbers::pi / 2.0;
      s += std::pow(w, m) * (a[n] * std::cos(phase) + b[n] * std::sin(phase));
    }
    return s;
  }

  std::size_t modes() const { return a.size() - 1; }
};

/// Random trigonometric polynomial with `modes` modes and coefficients
/// uniform in [-scale, scale], damped by 1/(1+n) so higher modes stay small.
inline TrigPoly random_trig_poly(std::mt19937_64& rng, std::size_t modes, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  TrigPoly p;
  p.a.assign(modes + 1, 0.0);
  p.b.assign(modes + 1, 0.0);
  p.a[0] = u(rng);
  for (std::size_t n = 1; n <= modes; ++n) {
    p.a[n] = u(rng) / static_cast<double>(1 + n);
    p.b[n] = u(rng) / static_cast<double>(1 + n);
  }
  return p;
}

/// Trapezoid rule on a uniform periodic grid of `points` nodes for the
/// normalized measure dθ/2π. Exact for trigonometric polynomials of degree < points.
inline double mean_over_circle(const std::function<double(double)>& fn, std::size_t points) {
  double s = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    s += fn(kTwoPi * static_cast<double>(j) / static_cast<double>(points));
  }
  return s / static_cast<double>(points);
}

inline double l2_squared(const std::function<double(double)>& fn, std::size_t points = 4096) {
  return mean_over_circle([&](double x) { return fn(x) * fn(x); }, points);
}

/// Central difference of order n (n = 1 or 2) with step h.
inline double central_difference(const std::function<double(double)>& fn, double x, double h, int n) {
  if (n == 1) return (fn(x + h) - fn(x - h)) / (2.0 * h);
  return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
}

/// Partial Bell polynomial coefficients by brute-force set-partition
/// enumeration: the coefficient of Π x_i^{j_i} in B_{n,k} is the number of
/// partitions of {1..n} into k blocks whose block sizes have multiplicities j.
/// Keys are exponent vectors of length n - k + 1.
inline std::map<std::vector<int>, std::uint64_t> bell_by_set_partitions(int n, int k) {
  std::map<std::vector<int>, std::uint64_t> out;
  if (n == 0) {
    if (k == 0) out[{0}] = 1;
    return out;
  }
  // Restricted growth strings: label[0] = 0, label[i] ≤ 1 + max(label[0..i-1]).
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      if (blocks != k) return;
      std::vector<int> sizes(static_cast<std::size_t>(blocks), 0);
      for (int l : label) ++sizes[static_cast<std::size_t>(l)];
      std::vector<int> exps(static_cast<std::size_t>(n - k + 1), 0);
      for (int s : sizes) ++exps[static_cast<std::size_t>(s - 1)];
      ++out[exps];
      return;
    }
    for (int l = 0; l <= blocks && l < k; ++l) {
      label[static_cast<std::size_t>(i)] = l;
      rec(i + 1, std::max(blocks, l + 1));
    }
  };
  rec(1, 1);
  return out;
}

/// Stirling numbers of the second kind by the recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1).
inline std::uint64_t stirling2(int n, int k) {
  std::vector<std::vector<std::uint64_t>> s(static_cast<std::size_t>(n) + 1,
                                            std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= i; ++j) {
      s[i][j] = static_cast<std::uint64_t>(j) * s[i - 1][j] + s[i - 1][j - 1];
    }
  }
  return (k <= n) ? s[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] : 0;
}

/// Two-sided Kolmogorov distribution tail: P(sqrt(n) D > lambda) asymptotically.
inline double kolmogorov_tail(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace oracle
