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

#include "circleflow/certificates.hpp"

#include <cmath>
#include <stdexcept>

#include "circleflow/faa_di_bruno.hpp"

namespace circleflow {

namespace {

double squared(double x) { return x * x; }

void require_order(int k) {
  if (k < 1) throw std::invalid_argument("certificates need Sobolev index k >= 1");
}

}  // namespace

CircleFunction phi_apply_basis(const CircleFunction& f, const ScaledBasis& basis, int n) {
  if (std::abs(n) > basis.cutoff()) throw std::out_of_range("basis index beyond the cutoff");
  const AffineCircleMap warp(f);
  std::vector<double> points = warp.grid_image();
  for (double& p : points) p = basis.value(n, p);
  return CircleFunction::from_grid(std::move(points));
}

double phi_hs_norm_squared(const CircleFunction& f, const ScaledBasis& basis, int k) {
  double sum = 0.0;
  for (int n = -basis.cutoff(); n <= basis.cutoff(); ++n) {
    sum += squared(hk_norm(phi_apply_basis(f, basis, n), k));
  }
  return sum;
}

double phi_hs_distance_squared(const CircleFunction& f, const CircleFunction& g,
                               const ScaledBasis& basis, int k) {
  double sum = 0.0;
  for (int n = -basis.cutoff(); n <= basis.cutoff(); ++n) {
    sum += squared(hk_norm(phi_apply_basis(f, basis, n) - phi_apply_basis(g, basis, n), k));
  }
  return sum;
}

double phi_hs_norm_squared_at_zero(const ScaledBasis& basis, int k) {
  const auto& lambda = basis.lambda();
  double sum = squared(lambda(0));
  for (int n = 1; n <= basis.cutoff(); ++n) {
    const double top = 0.5 * (1.0 + std::pow(static_cast<double>(n), 2 * k));
    sum += (squared(lambda(n)) + squared(lambda(-n))) * top;
  }
  return sum;
}

HsCertificate hs_bound_certificate(const CircleFunction& f, int k, const ScaledBasis& basis) {
  require_order(k);
  HsCertificate cert;
  cert.K = BellTable::shared().expanded_term_count(k);
  cert.c_k = sobolev_constant(k);
  cert.f_norm = hk_norm(f, k);
  cert.actual = phi_hs_norm_squared(f, basis, k);

  const double K = static_cast<double>(cert.K);
  const double jet = std::pow(1.0 + cert.c_k * cert.f_norm, 2 * k);
  const double literal = std::pow(cert.c_k, 2 * k) * std::pow(cert.f_norm, 2 * k);
  const auto& lambda = basis.lambda();
  for (int n = -basis.cutoff(); n <= basis.cutoff(); ++n) {
    const double l2 = squared(lambda(n));
    const double nk = std::pow(std::abs(static_cast<double>(n)), 2 * k);
    cert.bound += l2 + K * K * l2 * nk * jet;
    cert.literal_bound += l2 + K * l2 * nk * literal;
  }
  cert.holds = cert.actual <= cert.bound;
  cert.literal_bound_holds = cert.actual <= cert.literal_bound;
  return cert;
}

double lipschitz_constant(int k, double R, const ScaledBasis& basis) {
  require_order(k);
  const double K = static_cast<double>(BellTable::shared().telescoped_term_count(k));
  const double c = sobolev_constant(k);
  const double scale = K * K * std::pow(c, 2 * k) * std::pow(R, 2 * k);
  const auto& lambda = basis.lambda();
  double sum = 0.0;
  for (int n = basis.cutoff(); n >= 1; --n) {
    const double x = static_cast<double>(n);
    const double l2 = squared(lambda(n)) + squared(lambda(-n));
    sum += l2 * x * x + scale * l2 * std::pow(x, 2 * k + 2);
  }
  return std::sqrt(sum);
}

LipschitzCertificate lipschitz_certificate(const CircleFunction& f, const CircleFunction& g,
                                           int k, double R, const ScaledBasis& basis) {
  require_order(k);
  if (!(R > 0.0)) throw std::invalid_argument("Lipschitz radius must be positive");
  if (hk_norm(f, k) > R || hk_norm(g, k) > R) {
    throw std::invalid_argument("Lipschitz certificate inputs must lie in the H^k ball of radius R");
  }
  LipschitzCertificate cert;
  cert.K = BellTable::shared().telescoped_term_count(k);
  cert.c_k = sobolev_constant(k);
  cert.C_R = lipschitz_constant(k, R, basis);
  const double gap = hk_norm(f - g, k);
  if (gap > 0.0) {
    cert.ratio = std::sqrt(phi_hs_distance_squared(f, g, basis, k)) / gap;
  }
  cert.holds = cert.ratio <= cert.C_R;
  return cert;
}

}  // namespace circleflow
