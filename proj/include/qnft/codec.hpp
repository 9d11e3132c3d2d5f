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

#include <span>
#include <string>
#include <utility>

#include "qnft/rng.hpp"

namespace qnft::codec {

/// Phase comparison tolerance used throughout the codec (radians).
inline constexpr double kPhaseTolerance = 1e-9;
inline constexpr int kMaxTokenQubits = 50;

/// Owner/asset bits of one block. Bit i = 1 is the leftmost character.
struct InfoPayload {
  std::string bits;
  int block_index = 1;  // m, 1-based
};

/// Chain-wide encoding of owner information:
///   theta_mA = (1 / base^{m-1}) * sum_{i=1..L} bit_i * theta1 / 2^{i-1}.
struct PhaseEncoding {
  double theta1 = 0.0;
  int base = 2;
  int info_bits = 3;

  void validate() const;
};

/// Random token: `bits` are the measured outcomes written b_q ... b_1, so
/// position i = 1 is the rightmost character.
struct Token {
  std::string bits;
  double theta = 0.0;
  int peer_index = 1;  // k
  double theta1 = 0.0;
};

struct PhasePair {
  double theta_a = 0.0;
  double theta_b = 0.0;
};

double encode_info(const InfoPayload& payload, const PhaseEncoding& enc);

/// Inverse of encode_info. Throws DecodeError when no bit string lies within
/// kPhaseTolerance, or when adjacent lattice points are closer than twice
/// the tolerance (decoding would be ambiguous).
std::string decode_info(double theta, const PhaseEncoding& enc, int block_index);

/// theta = sum_i b_i * theta1 / 2^{k+i} with i = 1 at the rightmost bit.
double token_phase(std::string_view bits, double theta1, int peer_index);

/// Prepares `qubits` fresh qubits in |+>, measures them, and derives the
/// token phase from the outcomes.
Token generate_token(int qubits, double theta1, int peer_index, Rng& rng);

/// True iff sum over blocks of (theta_a + theta_b) < pi.
bool validate_budget(std::span<const PhasePair> chain_phases);

/// Sum of (theta_a + theta_b) over the chain.
double phase_sum(std::span<const PhasePair> chain_phases);

}  // namespace qnft::codec
