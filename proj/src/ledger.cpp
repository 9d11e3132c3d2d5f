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

#include "qnft/ledger.hpp"

#include <cmath>
#include <numbers>

#include "qnft/errors.hpp"

namespace qnft::ledger {

void Block::check_records(const codec::PhaseEncoding& enc) const {
  if (owner && std::abs(codec::encode_info(*owner, enc) - theta_a) > codec::kPhaseTolerance) {
    throw CodecError("block " + std::to_string(index) + ": theta_a does not match owner bits");
  }
  if (token &&
      std::abs(codec::token_phase(token->bits, token->theta1, token->peer_index) - theta_b) >
          codec::kPhaseTolerance) {
    throw CodecError("block " + std::to_string(index) + ": theta_b does not match token bits");
  }
}

sim::StateVector create_block_state(const Block& block, bool enforce_budget) {
  if (!std::isfinite(block.theta_a) || !std::isfinite(block.theta_b)) {
    throw ParameterError("block phases must be finite");
  }
  if (enforce_budget && !(block.relative_phase() < std::numbers::pi)) {
    throw ConstraintError("block " + std::to_string(block.index) + " phases sum to >= pi");
  }
  sim::StateVector pair(2);
  sim::bell_pair(pair, 0, 1);
  pair.apply(sim::Gate::phase(block.theta_a), {0});
  pair.apply(sim::Gate::phase(block.theta_b), {1});
  return pair;
}

std::vector<sim::Operation> link_operations(int m, const ChainOptions& options) {
  std::vector<sim::Operation> ops;
  if (m < 2) return ops;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<int> qubits;
    for (int j = 0; j < m; ++j) qubits.push_back(2 * j + cls);
    const int controls = m - 1;
    if (controls == 1) {
      ops.push_back({sim::Gate::cphase(options.link_phase), qubits});
    } else if (controls == 2 && options.decompose_ccp) {
      auto decomposed = sim::ccphase_decomposition(options.link_phase, qubits[0], qubits[1], qubits[2]);
      ops.insert(ops.end(), decomposed.begin(), decomposed.end());
    } else {
      ops.push_back({sim::Gate::mcphase(options.link_phase, controls), qubits});
    }
  }
  return ops;
}

sim::Circuit chain_circuit(std::span<const Block> blocks, const ChainOptions& options) {
  if (blocks.empty()) throw ParameterError("chain circuit needs at least one block");
  sim::Circuit circuit(2 * static_cast<int>(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int a = 2 * static_cast<int>(i);
    circuit.add(sim::Gate::h(), {a});
    circuit.add(sim::Gate::cnot(), {a, a + 1});
    circuit.add(sim::Gate::phase(blocks[i].theta_a), {a});
    circuit.add(sim::Gate::phase(blocks[i].theta_b), {a + 1});
    for (auto& op : link_operations(static_cast<int>(i) + 1, options)) {
      circuit.add(op.gate, std::move(op.qubits));
    }
  }
  return circuit;
}

ChainState::ChainState(codec::PhaseEncoding encoding, ChainOptions options)
    : encoding_(encoding), options_(options) {
  if (options_.max_blocks < 1 || 2 * options_.max_blocks > sim::kMaxStateQubits) {
    throw CapacityError("chain block cap must be in 1.." + std::to_string(sim::kMaxStateQubits / 2));
  }
}

std::vector<codec::PhasePair> ChainState::phases() const {
  std::vector<codec::PhasePair> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back({b.theta_a, b.theta_b});
  return out;
}

void ChainState::check_appendable(const Block& block) const {
  if (block.index != size() + 1) {
    throw OrderingError("expected block " + std::to_string(size() + 1) + ", got block " +
                        std::to_string(block.index));
  }
  if (size() >= options_.max_blocks) {
    throw CapacityError("chain is full (" + std::to_string(options_.max_blocks) + " blocks)");
  }
  if (options_.enforce_budget) {
    auto ph = phases();
    ph.push_back({block.theta_a, block.theta_b});
    if (!codec::validate_budget(ph)) {
      throw ConstraintError("appending block " + std::to_string(block.index) +
                            " would bring the phase sum to " + std::to_string(codec::phase_sum(ph)) +
                            " >= pi");
    }
  }
}

void ChainState::append(const Block& block) {
  check_appendable(block);
  append(block, create_block_state(block, options_.enforce_budget));
}

void ChainState::append(const Block& block, sim::StateVector verified_pair) {
  check_appendable(block);
  if (verified_pair.num_qubits() != 2) throw ParameterError("block payload must be a 2-qubit state");
  sim::StateVector next =
      register_ ? register_->tensor(verified_pair) : std::move(verified_pair);
  for (const auto& op : link_operations(block.index, options_)) next.apply(op.gate, op.qubits);
  register_ = std::move(next);
  blocks_.push_back(block);
}

std::optional<sim::StateVector> closed_form(std::span<const Block> blocks, const ChainOptions& options) {
  ChainState replay(codec::PhaseEncoding{}, options);
  for (const auto& b : blocks) replay.append(b);
  return replay.register_state();
}

std::optional<sim::StateVector> closed_form(const ChainState& chain) {
  return closed_form(chain.blocks(), chain.options());
}

}  // namespace qnft::ledger
