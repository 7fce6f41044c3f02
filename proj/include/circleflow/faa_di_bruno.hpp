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

#include <cstdint>
#include <span>
#include <vector>

#include "circleflow/circle_function.hpp"
#include "circleflow/spectral_basis.hpp"

namespace circleflow {

/// One monomial of a partial Bell polynomial B_{n,k}:
///   coefficient · Π_i x_i^{exponents[i-1]}.
struct BellMonomial {
  std::uint64_t coefficient = 0;
  std::vector<int> exponents;  // j_1 .. j_{n-k+1}

  int degree() const;  // Σ j_i, equal to k
  int weight() const;  // Σ i·j_i, equal to n
};

/// Partial Bell polynomials B_{n,k} for 0 ≤ k ≤ n ≤ n_max (n_max ≤ 12),
/// expanded by enumerating the exponent sequences with
/// Σ j_i = k and Σ i·j_i = n. Coefficients n!/(Π j_i! (i!)^{j_i}) are exact.
class BellTable {
 public:
  static constexpr int kMaxOrder = 12;

  explicit BellTable(int n_max);

  int n_max() const { return n_max_; }

  /// Throws std::out_of_range unless 0 ≤ k ≤ n ≤ n_max.
  const std::vector<BellMonomial>& entry(int n, int k) const;

  /// B_{n,k}(x_1, ..., x_{n-k+1}); extra trailing xs are ignored.
  double evaluate(int n, int k, std::span<const double> xs) const;

  /// Number of terms in the order-n composition-derivative expansion
  /// Σ_k f^{(k)} B_{n,k}, counted with multiplicity (the integer coefficient
  /// of a monomial counts as that many terms). Equals the Bell number of n.
  std::uint64_t expanded_term_count(int n) const;

  /// Number of distinct monomials in the order-n expansion (partitions of n).
  std::size_t distinct_monomial_count(int n) const;

  /// Terms in the difference of two order-n expansions after telescoping
  /// each product: a monomial of degree d splits into d + 1 terms.
  std::uint64_t telescoped_term_count(int n) const;

  /// Shared table up to kMaxOrder.
  static const BellTable& shared();

 private:
  int n_max_;
  std::vector<std::vector<std::vector<BellMonomial>>> entries_;
};

/// B_{n,k}(xs). Throws std::invalid_argument if k > n or xs is too short.
double bell_polynomial(int n, int k, std::span<const double> xs);

/// Values f(x), f'(x), ..., f^{(n)}(x) at one point.
struct DerivativeJet {
  std::vector<double> values;

  DerivativeJet() = default;
  explicit DerivativeJet(std::vector<double> v);
  std::size_t order() const { return values.size() - 1; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// n-th derivative of f∘g at x from the jet of f at g(x) and the jet of g at x:
///   (f∘g)^{(n)} = Σ_{k=0}^n f^{(k)}(g(x)) B_{n,k}(g'(x), ..., g^{(n-k+1)}(x)).
/// Throws std::invalid_argument if either jet has fewer than n + 1 entries.
double compose_derivative(const DerivativeJet& f_jet, const DerivativeJet& g_jet, int n);

}  // namespace circleflow
