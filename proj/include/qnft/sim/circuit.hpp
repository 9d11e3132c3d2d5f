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
#include <vector>

#include "qnft/sim/density_matrix.hpp"
#include "qnft/sim/gate.hpp"
#include "qnft/sim/state_vector.hpp"

namespace qnft::sim {

struct Operation {
  Gate gate;
  std::vector<int> qubits;
};

/// Ordered gate list over a fixed register width. Runs noiselessly on a
/// statevector, or on a density matrix with depolarizing noise applied to
/// every operand qubit after every gate.
class Circuit {
 public:
  explicit Circuit(int n_qubits) : n_qubits_(n_qubits) {}

  int num_qubits() const noexcept { return n_qubits_; }
  const std::vector<Operation>& operations() const noexcept { return ops_; }

  Circuit& add(const Gate& gate, std::vector<int> qubits);
  Circuit& append(const Circuit& other);

  void run(StateVector& state) const;
  void run(DensityMatrix& rho, std::optional<NoiseChannel> noise = std::nullopt) const;

  StateVector simulate() const;
  DensityMatrix simulate_density(std::optional<NoiseChannel> noise = std::nullopt) const;

 private:
  int n_qubits_;
  std::vector<Operation> ops_;
};

/// Controlled-controlled phase built from two-qubit gates:
/// CP(theta/2)[c2,t]; CNOT[c1,c2]; CP(-theta/2)[c2,t]; CNOT[c1,c2]; CP(theta/2)[c1,t].
std::vector<Operation> ccphase_decomposition(double theta, int control1, int control2, int target);

}  // namespace qnft::sim
