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

#include <optional>
#include <span>
#include <vector>

#include "qnft/codec.hpp"
#include "qnft/sim/circuit.hpp"
#include "qnft/sim/state_vector.hpp"

namespace qnft::ledger {

inline constexpr int kMaxBlocks = 6;

/// One NFT entry. Class-A phase carries owner/asset information, class-B
/// phase is the token.
struct Block {
  int index = 1;  // m, 1-based position in the chain
  double theta_a = 0.0;
  double theta_b = 0.0;
  std::optional<codec::InfoPayload> owner;
  std::optional<codec::Token> token;

  double relative_phase() const { return theta_a + theta_b; }

  /// Re-derives theta_a from `owner` and theta_b from `token` where present;
  /// throws CodecError on mismatch.
  void check_records(const codec::PhaseEncoding& enc) const;
};

struct ChainOptions {
  /// Phase of the inter-block controlled gates.
  double link_phase = 1.5707963267948966;
  /// Enforce sum(theta_a + theta_b) < pi over the chain.
  bool enforce_budget = true;
  /// Realize the two-control link with CP/CNOT gates instead of a direct CCP.
  bool decompose_ccp = true;
  int max_blocks = kMaxBlocks;
};

/// (|00> + e^{i(theta_a + theta_b)}|11>)/sqrt2 on 2 qubits (A = qubit 0).
/// ConstraintError when the block alone breaks the phase budget.
sim::StateVector create_block_state(const Block& block, bool enforce_budget = true);

/// Gates that link block m (1-based) into a register of 2m qubits: one
/// (m-1)-controlled phase over the class-A qubits and one over class-B.
std::vector<sim::Operation> link_operations(int m, const ChainOptions& options);

/// Full preparation circuit of `blocks` from |0...0>.
sim::Circuit chain_circuit(std::span<const Block> blocks, const ChainOptions& options);

/// A peer's copy of the chain: block records plus the entangled register.
/// Block m occupies qubits 2(m-1) (A) and 2(m-1)+1 (B).
class ChainState {
 public:
  explicit ChainState(codec::PhaseEncoding encoding = {}, ChainOptions options = {});

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  int size() const noexcept { return static_cast<int>(blocks_.size()); }
  bool empty() const noexcept { return blocks_.empty(); }
  const codec::PhaseEncoding& encoding() const noexcept { return encoding_; }
  const ChainOptions& options() const noexcept { return options_; }

  /// Empty until the first block is appended.
  const std::optional<sim::StateVector>& register_state() const noexcept { return register_; }

  std::vector<codec::PhasePair> phases() const;

  /// Throws OrderingError / ConstraintError / CapacityError without
  /// modifying the chain when `block` cannot be appended.
  void check_appendable(const Block& block) const;

  /// Adjoins a freshly prepared block state and links it.
  void append(const Block& block);

  /// Adjoins `verified_pair` (the 2-qubit state a peer accepted) and links it.
  void append(const Block& block, sim::StateVector verified_pair);

 private:
  codec::PhaseEncoding encoding_;
  ChainOptions options_;
  std::vector<Block> blocks_;
  std::optional<sim::StateVector> register_;
};

/// Rebuilds the register by replaying create_block_state + append over the
/// chain's records. Empty chain gives nullopt.
std::optional<sim::StateVector> closed_form(const ChainState& chain);

/// Same as above for bare records.
std::optional<sim::StateVector> closed_form(std::span<const Block> blocks, const ChainOptions& options);

}  // namespace qnft::ledger
