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

#include "qnft/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qnft/errors.hpp"
#include "qnft/sim/state_vector.hpp"

namespace qnft::codec {

namespace {

void check_bits(std::string_view bits, const char* what) {
  if (!std::all_of(bits.begin(), bits.end(), [](char c) { return c == '0' || c == '1'; })) {
    throw CodecError(std::string(what) + " must contain only '0' and '1'");
  }
}

double block_scale(const PhaseEncoding& enc, int block_index) {
  if (block_index < 1) throw CodecError("block index must be >= 1");
  return std::pow(static_cast<double>(enc.base), block_index - 1);
}

}  // namespace

void PhaseEncoding::validate() const {
  if (!(theta1 > 0.0) || !std::isfinite(theta1)) throw CodecError("theta1 must be a positive angle");
  if (base < 1) throw CodecError("scaling base must be >= 1");
  if (info_bits < 1 || info_bits > 64) throw CodecError("info length must be in 1..64");
}

double encode_info(const InfoPayload& payload, const PhaseEncoding& enc) {
  enc.validate();
  if (static_cast<int>(payload.bits.size()) != enc.info_bits) {
    throw CodecError("info payload has " + std::to_string(payload.bits.size()) +
                     " bits, chain expects " + std::to_string(enc.info_bits));
  }
  check_bits(payload.bits, "info payload");
  double sum = 0.0;
  for (std::size_t i = 0; i < payload.bits.size(); ++i) {
    if (payload.bits[i] == '1') sum += std::ldexp(enc.theta1, -static_cast<int>(i));
  }
  return sum / block_scale(enc, payload.block_index);
}

std::string decode_info(double theta, const PhaseEncoding& enc, int block_index) {
  enc.validate();
  const double scale = block_scale(enc, block_index);
  const double step = std::ldexp(enc.theta1, -(enc.info_bits - 1)) / scale;
  if (step < 2.0 * kPhaseTolerance) {
    throw DecodeError("lattice step below tolerance; phase is not uniquely decodable");
  }
  if (!std::isfinite(theta)) throw DecodeError("phase is not finite");
  const double index = std::nearbyint(theta / step);
  if (index < 0.0 || index >= std::ldexp(1.0, enc.info_bits)) {
    throw DecodeError("phase lies outside the encodable range");
  }
  const auto n = static_cast<unsigned long long>(index);
  std::string bits(static_cast<std::size_t>(enc.info_bits), '0');
  for (int i = 0; i < enc.info_bits; ++i) {
    if ((n >> (enc.info_bits - 1 - i)) & 1ULL) bits[static_cast<std::size_t>(i)] = '1';
  }
  if (std::abs(encode_info({bits, block_index}, enc) - theta) > kPhaseTolerance) {
    throw DecodeError("phase does not match any encoded bit string");
  }
  return bits;
}

double token_phase(std::string_view bits, double theta1, int peer_index) {
  check_bits(bits, "token bits");
  if (peer_index < 1) throw CodecError("token peer index must be >= 1");
  double theta = 0.0;
  const int q = static_cast<int>(bits.size());
  for (int i = 1; i <= q; ++i) {
    if (bits[static_cast<std::size_t>(q - i)] == '1') theta += std::ldexp(theta1, -(peer_index + i));
  }
  return theta;
}

Token generate_token(int qubits, double theta1, int peer_index, Rng& rng) {
  if (qubits < 1 || qubits > kMaxTokenQubits) {
    throw CapacityError("token needs 1.." + std::to_string(kMaxTokenQubits) + " qubits");
  }
  std::string bits(static_cast<std::size_t>(qubits), '0');
  // The H-prepared qubits never interact, so each one is simulated in its
  // own register. Measured qubit j fills position i = j + 1 (rightmost first).
  for (int j = 0; j < qubits; ++j) {
    sim::StateVector reg(1);
    reg.apply(sim::Gate::h(), {0});
    if (sim::measure_computational(reg, 0, rng) == 1) bits[static_cast<std::size_t>(qubits - 1 - j)] = '1';
  }
  Token token;
  token.theta = token_phase(bits, theta1, peer_index);
  token.bits = std::move(bits);
  token.peer_index = peer_index;
  token.theta1 = theta1;
  return token;
}

double phase_sum(std::span<const PhasePair> chain_phases) {
  double total = 0.0;
  for (const auto& p : chain_phases) total += p.theta_a + p.theta_b;
  return total;
}

bool validate_budget(std::span<const PhasePair> chain_phases) {
  return phase_sum(chain_phases) < std::numbers::pi;
}

}  // namespace qnft::codec
