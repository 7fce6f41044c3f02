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

#include "circleflow/faa_di_bruno.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace circleflow {

namespace {

std::uint64_t factorial(int n) {
  std::uint64_t out = 1;
  for (int i = 2; i <= n; ++i) out *= static_cast<std::uint64_t>(i);
  return out;
}

// Backtracks over j_part, j_{part-1}, ..., j_1 subject to the remaining
// count and weight budgets.
void enumerate(int part, int count_left, int weight_left, std::vector<int>& exps,
               std::vector<std::vector<int>>& out) {
  if (part == 0) {
    if (count_left == 0 && weight_left == 0) out.push_back(exps);
    return;
  }
  for (int j = 0; j <= count_left && j * part <= weight_left; ++j) {
    exps[static_cast<std::size_t>(part - 1)] = j;
    enumerate(part - 1, count_left - j, weight_left - j * part, exps, out);
  }
  exps[static_cast<std::size_t>(part - 1)] = 0;
}

}  // namespace

int BellMonomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

int BellMonomial::weight() const {
  int w = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) w += static_cast<int>(i + 1) * exponents[i];
  return w;
}

BellTable::BellTable(int n_max) : n_max_(n_max) {
  if (n_max < 0 || n_max > kMaxOrder) {
    throw std::invalid_argument("BellTable supports orders 0.." + std::to_string(kMaxOrder));
  }
  entries_.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    auto& row = entries_[static_cast<std::size_t>(n)];
    row.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
      const int length = n - k + 1;
      std::vector<int> exps(static_cast<std::size_t>(length), 0);
      std::vector<std::vector<int>> sequences;
      enumerate(length, k, n, exps, sequences);
      for (auto& seq : sequences) {
        // n! / Π (j_i! (i!)^{j_i}); every partial quotient stays integral.
        std::uint64_t denom = 1;
        for (std::size_t i = 0; i < seq.size(); ++i) {
          const std::uint64_t fi = factorial(static_cast<int>(i + 1));
          for (int r = 0; r < seq[i]; ++r) denom *= fi;
          denom *= factorial(seq[i]);
        }
        row[static_cast<std::size_t>(k)].push_back({factorial(n) / denom, std::move(seq)});
      }
    }
  }
}

const BellTable& BellTable::shared() {
  static const BellTable table(kMaxOrder);
  return table;
}

const std::vector<BellMonomial>& BellTable::entry(int n, int k) const {
  if (n < 0 || n > n_max_ || k < 0 || k > n) {
    throw std::out_of_range("Bell table index out of range");
  }
  return entries_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

double BellTable::evaluate(int n, int k, std::span<const double> xs) const {
  const auto& monomials = entry(n, k);
  const auto needed = static_cast<std::size_t>(n - k + 1);
  if (xs.size() < needed && k > 0) {
    throw std::invalid_argument("bell_polynomial: need n-k+1 arguments");
  }
  double sum = 0.0;
  for (const BellMonomial& mono : monomials) {
    double term = static_cast<double>(mono.coefficient);
    for (std::size_t i = 0; i < mono.exponents.size(); ++i) {
      for (int r = 0; r < mono.exponents[i]; ++r) term *= xs[i];
    }
    sum += term;
  }
  return sum;
}

std::uint64_t BellTable::expanded_term_count(int n) const {
  std::uint64_t count = 0;
  for (int k = 0; k <= n; ++k) {
    for (const BellMonomial& mono : entry(n, k)) count += mono.coefficient;
  }
  return count;
}

std::size_t BellTable::distinct_monomial_count(int n) const {
  std::size_t count = 0;
  for (int k = 0; k <= n; ++k) count += entry(n, k).size();
  return count;
}

std::uint64_t BellTable::telescoped_term_count(int n) const {
  std::uint64_t count = 0;
  for (int k = 0; k <= n; ++k) {
    for (const BellMonomial& mono : entry(n, k)) {
      count += mono.coefficient * static_cast<std::uint64_t>(mono.degree() + 1);
    }
  }
  return count;
}

double bell_polynomial(int n, int k, std::span<const double> xs) {
  if (n < 0 || k < 0) throw std::invalid_argument("bell_polynomial: negative index");
  if (k > n) throw std::invalid_argument("bell_polynomial: k must not exceed n");
  if (n > BellTable::kMaxOrder) throw std::invalid_argument("bell_polynomial: n > 12");
  return BellTable::shared().evaluate(n, k, xs);
}

DerivativeJet::DerivativeJet(std::vector<double> v) : values(std::move(v)) {
  if (values.empty()) throw std::invalid_argument("derivative jet needs at least one entry");
}

double compose_derivative(const DerivativeJet& f_jet, const DerivativeJet& g_jet, int n) {
  if (n < 1) throw std::invalid_argument("compose_derivative: order must be positive");
  const auto need = static_cast<std::size_t>(n) + 1;
  if (f_jet.values.size() < need || g_jet.values.size() < need) {
    throw std::invalid_argument("compose_derivative: jets must hold n + 1 entries");
  }
  // Arguments of B_{n,k} are g', g'', ...
  const std::span<const double> g_derivs(g_jet.values.data() + 1, static_cast<std::size_t>(n));
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    sum += f_jet[static_cast<std::size_t>(k)] * bell_polynomial(n, k, g_derivs);
  }
  return sum;
}

}  // namespace circleflow
