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

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnft/rng.hpp"
#include "qnft/sim/gate.hpp"

namespace qnft::sim {

inline constexpr int kMaxStateQubits = 16;

/// Pure state over n qubits. Qubit 0 is the least-significant bit of the
/// basis index.
class StateVector {
 public:
  /// |0...0> over `n_qubits` (1..16); CapacityError otherwise.
  explicit StateVector(int n_qubits);

  /// Takes ownership of explicit amplitudes. Length must be a power of two
  /// and the vector normalized to 1e-10.
  static StateVector from_amplitudes(Eigen::VectorXcd amplitudes);

  int num_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_(static_cast<Eigen::Index>(index)); }
  double norm_squared() const { return amps_.squaredNorm(); }

  void apply(const Gate& gate, std::span<const int> qubits);
  void apply(const Gate& gate, std::initializer_list<int> qubits) {
    apply(gate, std::span<const int>(qubits.begin(), qubits.size()));
  }

  /// Applies an arbitrary 2^k x 2^k matrix (assumed unitary) to `qubits`;
  /// local bit j of the matrix index is qubits[j].
  void apply_matrix(const Eigen::MatrixXcd& u, std::span<const int> qubits);

  /// Register whose low qubits are `*this` and high qubits are `high`.
  StateVector tensor(const StateVector& high) const;

  /// Probability of each joint outcome of `qubits` (outcome bit j = qubits[j]).
  std::vector<double> marginal_probabilities(std::span<const int> qubits) const;

  /// Projects onto joint outcome `outcome` of `qubits` and renormalizes.
  void collapse(std::span<const int> qubits, std::size_t outcome);

  /// Born-rule measurement of several qubits at once; returns the outcome.
  std::size_t measure(std::span<const int> qubits, Rng& rng);

  std::vector<std::size_t> sample(std::span<const int> qubits, std::size_t shots, Rng& rng) const;

  /// One "index re im" line per amplitude, fixed 17-digit precision.
  std::string dump() const;

 private:
  StateVector(int n_qubits, Eigen::VectorXcd amplitudes);

  int n_qubits_;
  Eigen::VectorXcd amps_;
};

StateVector new_state(int n_qubits);

/// H on qA then CNOT(qA -> qB). Both qubits must be |0> marginally.
void bell_pair(StateVector& state, int qubit_a, int qubit_b);

/// Computational-basis measurement of one qubit; collapses `state`.
int measure_computational(StateVector& state, int qubit, Rng& rng);

/// Outcomes of the block verification basis
/// {(|00> + e^{i theta}|11>)/sqrt2, (|00> - e^{i theta}|11>)/sqrt2, |01>, |10>}.
/// The leak labels read (bit of qubit_a, bit of qubit_b).
enum class BlockOutcome { Plus, Minus, Leak01, Leak10 };

std::string to_string(BlockOutcome outcome);

/// The 4x4 unitary whose columns are the verification basis vectors, in the
/// local basis (bit 0 = qubit_a, bit 1 = qubit_b). Column 0 = plus,
/// 1 = leak10, 2 = leak01, 3 = minus.
Eigen::Matrix4cd block_basis(double theta);

/// Probabilities of each BlockOutcome, indexed by the enum value.
std::array<double, 4> block_basis_probabilities(const StateVector& state, int qubit_a, int qubit_b,
                                                double theta);

/// Projective measurement in the block basis; collapses `state` onto the
/// measured basis vector.
BlockOutcome measure_in_block_basis(StateVector& state, int qubit_a, int qubit_b, double theta,
                                    Rng& rng);

/// <a|b>
Complex inner_product(const StateVector& a, const StateVector& b);

}  // namespace qnft::sim
