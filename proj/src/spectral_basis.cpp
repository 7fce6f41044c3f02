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

#include "circleflow/spectral_basis.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace circleflow {

ScalingSequence::ScalingSequence(ScalingFamily family, double parameter)
    : family_(family), parameter_(parameter) {
  if (!(parameter > 0.0) || !std::isfinite(parameter)) {
    throw std::invalid_argument("scaling sequence parameter must be positive");
  }
}

ScalingSequence ScalingSequence::exponential(double rate) {
  return {ScalingFamily::Exponential, rate};
}

ScalingSequence ScalingSequence::gaussian(double rate) { return {ScalingFamily::Gaussian, rate}; }

ScalingSequence ScalingSequence::power_law(double exponent) {
  return {ScalingFamily::PowerLaw, exponent};
}

ScalingSequence ScalingSequence::from_name(const std::string& family, double parameter) {
  if (family == "exponential") return exponential(parameter);
  if (family == "gaussian") return gaussian(parameter);
  if (family == "power_law") return power_law(parameter);
  throw std::invalid_argument("unknown scaling family '" + family + "'");
}

ScalingSequence ScalingSequence::times_abs_n() const {
  if (abs_n_weight_) throw std::logic_error("sequence already carries an |n| weight");
  ScalingSequence out = *this;
  out.abs_n_weight_ = true;
  return out;
}

double ScalingSequence::log_value_at(int n) const {
  const double a = std::abs(static_cast<double>(n));
  double log_value = 0.0;
  switch (family_) {
    case ScalingFamily::Exponential: log_value = -parameter_ * a; break;
    case ScalingFamily::Gaussian: log_value = -parameter_ * a * a; break;
    case ScalingFamily::PowerLaw: log_value = -parameter_ * std::log1p(a); break;
  }
  if (abs_n_weight_ && n != 0) log_value += std::log(a);
  return log_value;
}

double ScalingSequence::value_at(int n) const {
  const double a = std::abs(static_cast<double>(n));
  double value = 0.0;
  switch (family_) {
    case ScalingFamily::Exponential: value = std::exp(-parameter_ * a); break;
    case ScalingFamily::Gaussian: value = std::exp(-parameter_ * a * a); break;
    case ScalingFamily::PowerLaw: value = std::pow(1.0 + a, -parameter_); break;
  }
  if (abs_n_weight_ && n != 0) value *= a;
  return value;
}

std::string ScalingSequence::family_name() const {
  switch (family_) {
    case ScalingFamily::Exponential: return "exponential";
    case ScalingFamily::Gaussian: return "gaussian";
    case ScalingFamily::PowerLaw: return "power_law";
  }
  return "unknown";
}

std::string ScalingSequence::describe() const {
  std::ostringstream out;
  if (abs_n_weight_) out << "|n|*";
  out << family_name() << "(" << parameter_ << ")";
  return out.str();
}

ScaledBasis::ScaledBasis(ScalingSequence lambda, int cutoff, std::size_t grid_size)
    : lambda_(lambda), cutoff_(cutoff), grid_size_(grid_size) {
  if (cutoff < 1) throw std::invalid_argument("mode cutoff must be at least 1");
  const std::size_t needed = 4 * static_cast<std::size_t>(cutoff);
  if (grid_size_ == 0) {
    grid_size_ = 4;
    while (grid_size_ < needed) grid_size_ *= 2;
  }
  if (!is_power_of_two(grid_size_) || grid_size_ < needed) {
    throw std::invalid_argument("grid size must be a power of two >= 4 * mode cutoff");
  }
}

double ScaledBasis::value(int n, double theta) const {
  const double arg = static_cast<double>(n) * theta;
  return lambda_(n) * (n >= 0 ? std::cos(arg) : std::sin(arg));
}

CircleFunction ScaledBasis::basis_function(int n) const {
  if (std::abs(n) > cutoff_) throw std::out_of_range("basis index beyond the mode cutoff");
  std::vector<double> a(static_cast<std::size_t>(cutoff_) + 1, 0.0);
  std::vector<double> b(static_cast<std::size_t>(cutoff_) + 1, 0.0);
  const auto m = static_cast<std::size_t>(std::abs(n));
  // sin(nθ) = -sin(|n|θ) for n < 0.
  if (n >= 0) {
    a[m] = lambda_(n);
  } else {
    b[m] = -lambda_(n);
  }
  return CircleFunction::from_coefficients(grid_size_, a, b);
}

std::vector<double> ScaledBasis::expand(const CircleFunction& f) const {
  const FourierCoefficients& c = f.coefficients();
  std::vector<double> coords(dimension(), 0.0);
  const int available = static_cast<int>(c.max_mode());
  for (int n = -cutoff_; n <= cutoff_; ++n) {
    const int m = std::abs(n);
    if (m > available) continue;
    const auto i = static_cast<std::size_t>(n + cutoff_);
    const auto mi = static_cast<std::size_t>(m);
    coords[i] = (n >= 0 ? c.cos[mi] : -c.sin[mi]) / lambda_(n);
  }
  return coords;
}

CircleFunction ScaledBasis::synthesize(const std::vector<double>& coords) const {
  if (coords.size() != dimension()) throw std::invalid_argument("coordinate length mismatch");
  std::vector<double> a(static_cast<std::size_t>(cutoff_) + 1, 0.0);
  std::vector<double> b(static_cast<std::size_t>(cutoff_) + 1, 0.0);
  for (int n = -cutoff_; n <= cutoff_; ++n) {
    const double c = coords[static_cast<std::size_t>(n + cutoff_)] * lambda_(n);
    const auto m = static_cast<std::size_t>(std::abs(n));
    if (n >= 0) {
      a[m] += c;
    } else {
      b[m] -= c;
    }
  }
  return CircleFunction::from_coefficients(grid_size_, a, b);
}

double coordinate_norm(const std::vector<double>& coords) {
  double sum = 0.0;
  for (double c : coords) sum += c * c;
  return std::sqrt(sum);
}

BasisPair::BasisPair(ScalingSequence alpha, ScalingSequence lambda)
    : alpha_(alpha), lambda_(lambda) {
  auto mismatch = [](double got, double want) {
    return std::abs(got - want) > 1e-12 * std::abs(want);
  };
  if (mismatch(lambda_(0), alpha_(0))) {
    throw std::invalid_argument("basis pair requires lambda(0) = alpha(0)");
  }
  for (int n = 1; n <= 64; ++n) {
    for (int s : {n, -n}) {
      const double want = std::exp(alpha_.log_value_at(s) + std::log(static_cast<double>(n)));
      const double got = std::exp(lambda_.log_value_at(s));
      if (mismatch(got, want)) {
        throw std::invalid_argument("basis pair requires lambda(n) = |n| alpha(n)");
      }
    }
  }
}

BasisPair BasisPair::from_alpha(ScalingSequence alpha) {
  return BasisPair(alpha, alpha.times_abs_n());
}

double BasisPair::inclusion_coefficient(int n) const {
  return std::exp(alpha_.log_value_at(n) - lambda_.log_value_at(n));
}

HilbertSchmidtNorm inclusion_hs_norm(const BasisPair& pair, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
  double sum = 0.0;
  // Smallest terms first.
  for (int n = cutoff; n >= 1; --n) {
    const double up = pair.inclusion_coefficient(n);
    const double down = pair.inclusion_coefficient(-n);
    sum += up * up + down * down;
  }
  const double zero = pair.inclusion_coefficient(0);
  sum += zero * zero;
  return {std::sqrt(sum), 2.0 / static_cast<double>(cutoff)};
}

std::vector<double> q_lambda_diagonal(const BasisPair& pair, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
  std::vector<double> diag(static_cast<std::size_t>(2 * cutoff + 1));
  for (int n = -cutoff; n <= cutoff; ++n) {
    // ι* sends ê_n^{(λ)} to c_n ê_n^{(α)} and ι sends that back to c_n² ê_n^{(λ)}.
    const double adjoint = pair.inclusion_coefficient(n);
    const double forward = pair.inclusion_coefficient(n);
    diag[static_cast<std::size_t>(n + cutoff)] = forward * adjoint;
  }
  return diag;
}

double q_lambda_trace(const BasisPair& pair, int cutoff) {
  const std::vector<double> diag = q_lambda_diagonal(pair, cutoff);
  double trace = 0.0;
  for (auto it = diag.rbegin(); it != diag.rend(); ++it) trace += *it;
  return trace;
}

bool verify_rapid_decay(const ScalingSequence& lambda, int k_max, int n_max) {
  if (k_max < 1 || n_max < 2) throw std::invalid_argument("verify_rapid_decay: bad range");
  for (int k = 0; k <= k_max; ++k) {
    auto log_term = [&](int n) {
      return static_cast<double>(k) * std::log(static_cast<double>(n)) + lambda.log_value_at(n);
    };
    // Walk back from n_max while the sequence keeps (weakly) decreasing.
    int start = n_max;
    while (start > 1 && log_term(start - 1) >= log_term(start)) --start;
    if (start > n_max / 2) return false;
    if (log_term(n_max) > log_term(start) - std::log(10.0)) return false;
  }
  return true;
}

}  // namespace circleflow
