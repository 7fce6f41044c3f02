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

#include "circleflow/circle_function.hpp"
#include "circleflow/spectral_basis.hpp"

namespace circleflow {

// Left-translation operator Φ(f): g ↦ g∘(id + f), restricted to the
// truncated scaled basis, and the bound certificates built on it.

/// ê_n∘(id + f) on the grid of f. The basis function is evaluated exactly
/// at the warped points.
CircleFunction phi_apply_basis(const CircleFunction& f, const ScaledBasis& basis, int n);

/// Σ_{|n|≤N} ‖ê_n∘(id+f)‖²_{H^k}: squared HS norm of Φ(f) from H_λ to H^k.
double phi_hs_norm_squared(const CircleFunction& f, const ScaledBasis& basis, int k);

/// Σ_{|n|≤N} ‖ê_n∘(id+f) - ê_n∘(id+g)‖²_{H^k}.
double phi_hs_distance_squared(const CircleFunction& f, const CircleFunction& g,
                               const ScaledBasis& basis, int k);

/// Σ_{|n|≤N} ‖ê_n‖²_{H^k} in closed form: λ(0)² for n = 0 and
/// λ(n)²(1 + n^{2k})/2 otherwise.
double phi_hs_norm_squared_at_zero(const ScaledBasis& basis, int k);

struct HsCertificate {
  double actual = 0.0;         // squared HS norm of Φ(f)
  double bound = 0.0;          // bound asserted against `actual`
  double literal_bound = 0.0;  // the literal display Σ λ² + K λ² n^{2k} c^{2k} ‖f‖^{2k}
  std::uint64_t K = 0;         // expanded Faà di Bruno term count at order k
  double c_k = 0.0;            // embedding constant shared by all m < k
  double f_norm = 0.0;         // ‖f‖_{H^k}
  bool holds = false;          // actual ≤ bound
  bool literal_bound_holds = false;
};

/// Squared HS norm of Φ(f) against the Faà di Bruno bound.
///
/// The bound is per mode: ‖ê_n∘g‖²_{L²} ≤ λ(n)², and the k-th derivative of
/// ê_n∘g, g = id + f, is a sum of K terms ê_n^{(j)}(g)·m(g', ..., g^{(k)}),
/// each at most λ(n)|n|^k (1 + c_k‖f‖_{H^k})^k in L², because g' = 1 + f'
/// contributes the leading 1. Hence
///   actual ≤ Σ_n λ(n)² + K² λ(n)² |n|^{2k} (1 + c_k‖f‖_{H^k})^{2k}.
/// `literal_bound` drops both the leading 1 and one factor of K; it is reported
/// but cannot hold at f = 0 where the right side collapses to Σ λ(n)².
HsCertificate hs_bound_certificate(const CircleFunction& f, int k, const ScaledBasis& basis);

struct LipschitzCertificate {
  double ratio = 0.0;  // ‖Φ(f) - Φ(g)‖_HS / ‖f - g‖_{H^k}, 0 when f = g
  double C_R = 0.0;    // (Σ λ² n² + K² λ² n^{2k+2} c^{2k} R^{2k})^{1/2}
  std::uint64_t K = 0; // telescoped term count at order k
  double c_k = 0.0;
  bool holds = false;
};

/// Local Lipschitz certificate on the H^k ball of radius R. Throws
/// std::invalid_argument if either input lies outside the ball.
LipschitzCertificate lipschitz_certificate(const CircleFunction& f, const CircleFunction& g,
                                           int k, double R, const ScaledBasis& basis);

/// C_R from the display above over the basis cutoff.
double lipschitz_constant(int k, double R, const ScaledBasis& basis);

}  // namespace circleflow
