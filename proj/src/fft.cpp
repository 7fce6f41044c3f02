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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace circleflow::detail {
namespace {

// FFTW planning is not thread safe; execution on new arrays is. Plans are
// created once per size with FFTW_UNALIGNED so they accept any buffer.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [size, plans] : plans_) {
      fftw_destroy_plan(plans.forward);
      fftw_destroy_plan(plans.inverse);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> real(n);
    std::vector<fftw_complex> spec(n / 2 + 1);
    const int size = static_cast<int>(n);
    PlanPair plans;
    plans.forward = fftw_plan_dft_r2c_1d(size, real.data(), spec.data(),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.inverse = fftw_plan_dft_c2r_1d(size, spec.data(), real.data(),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plans.forward == nullptr || plans.inverse == nullptr) {
      throw std::runtime_error("fftw planning failed");
    }
    plans_.emplace(n, plans);
    return plans;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

FourierCoefficients forward_real(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t half = n / 2;
  std::vector<double> input(values.begin(), values.end());
  std::vector<fftw_complex> spec(half + 1);
  fftw_execute_dft_r2c(plan_cache().get(n).forward, input.data(), spec.data());

  FourierCoefficients c;
  c.cos.assign(half + 1, 0.0);
  c.sin.assign(half + 1, 0.0);
  const double inv = 1.0 / static_cast<double>(n);
  c.cos[0] = spec[0][0] * inv;
  for (std::size_t k = 1; k < half; ++k) {
    c.cos[k] = 2.0 * spec[k][0] * inv;
    c.sin[k] = -2.0 * spec[k][1] * inv;
  }
  c.cos[half] = spec[half][0] * inv;
  return c;
}

std::vector<double> inverse_real(const FourierCoefficients& coeffs, std::size_t grid_size) {
  const std::size_t half = grid_size / 2;
  const std::size_t modes = coeffs.max_mode();
  if (modes > half) throw std::invalid_argument("inverse_real: grid too coarse for coefficients");

  std::vector<fftw_complex> spec(half + 1);
  for (auto& z : spec) z[0] = z[1] = 0.0;
  const double m = static_cast<double>(grid_size);
  spec[0][0] = coeffs.cos[0] * m;
  for (std::size_t k = 1; k <= modes; ++k) {
    if (k == half) {
      // Only the cosine part survives at the output Nyquist frequency.
      spec[k][0] = coeffs.cos[k] * m;
    } else {
      spec[k][0] = 0.5 * m * coeffs.cos[k];
      spec[k][1] = -0.5 * m * coeffs.sin[k];
    }
  }
  std::vector<double> out(grid_size);
  fftw_execute_dft_c2r(plan_cache().get(grid_size).inverse, spec.data(), out.data());
  const double inv = 1.0 / m;
  for (double& v : out) v *= inv;
  return out;
}

}  // namespace circleflow::detail
