// Copyright 2026 The qnft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>

namespace testing {

/// |count/n - p| <= k * sqrt(p(1-p)/n); degenerate p requires an exact match.
inline bool within_sigma(std::size_t count, std::size_t n, double p, double k = 3.0) {
  const double freq = static_cast<double>(count) / static_cast<double>(n);
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  if (sigma == 0.0) return std::abs(freq - p) < 1e-12;
  return std::abs(freq - p) <= k * sigma;
}

}  // namespace testing
