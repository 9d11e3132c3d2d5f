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

#include <cstdint>
#include <random>
#include <span>

namespace qnft {

/// Seeded generator used for every stochastic step (measurement, token
/// draws, validator selection, shot sampling).
///
/// Uniform doubles are produced directly from the 64-bit engine output so
/// that recorded runs are bit-identical across standard library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Index drawn from `weights` (non-negative, not necessarily normalized).
  std::size_t pick(std::span<const double> weights);

  /// Independent stream for (master seed, stream index); splitmix64 finalizer.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

  Rng derive(std::uint64_t stream) { return Rng(derive_seed(next_u64(), stream)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qnft
