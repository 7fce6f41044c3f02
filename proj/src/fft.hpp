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

#include <cstddef>
#include <span>
#include <vector>

#include "circleflow/circle_function.hpp"

namespace circleflow::detail {

// Real Fourier coefficients of samples on a uniform grid (size a power of two).
FourierCoefficients forward_real(std::span<const double> values);

// Samples the interpolant with the given coefficients on `grid_size` points.
// grid_size must be a power of two ≥ 2·max_mode(); modes above grid_size/2
// are not representable and are rejected.
std::vector<double> inverse_real(const FourierCoefficients& coeffs, std::size_t grid_size);

}  // namespace circleflow::detail
