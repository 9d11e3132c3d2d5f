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

#include "qnft/sim/circuit.hpp"

#include "kernel.hpp"
#include "qnft/errors.hpp"

namespace qnft::sim {

Circuit& Circuit::add(const Gate& gate, std::vector<int> qubits) {
  detail::check_qubits(n_qubits_, qubits, gate.arity());
  ops_.push_back(Operation{gate, std::move(qubits)});
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ > n_qubits_) throw IndexError("appended circuit is wider than target");
  ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
  return *this;
}

void Circuit::run(StateVector& state) const {
  if (state.num_qubits() != n_qubits_) throw ParameterError("circuit/register width mismatch");
  for (const auto& op : ops_) state.apply(op.gate, op.qubits);
}

void Circuit::run(DensityMatrix& rho, std::optional<NoiseChannel> noise) const {
  if (rho.num_qubits() != n_qubits_) throw ParameterError("circuit/register width mismatch");
  for (const auto& op : ops_) {
    rho.apply(op.gate, op.qubits);
    if (noise) {
      for (int q : op.qubits) rho.apply_channel(*noise, q);
    }
  }
}

StateVector Circuit::simulate() const {
  StateVector state(n_qubits_);
  run(state);
  return state;
}

DensityMatrix Circuit::simulate_density(std::optional<NoiseChannel> noise) const {
  DensityMatrix rho(n_qubits_);
  run(rho, noise);
  return rho;
}

std::vector<Operation> ccphase_decomposition(double theta, int control1, int control2, int target) {
  return {
      {Gate::cphase(theta / 2), {control2, target}},
      {Gate::cnot(), {control1, control2}},
      {Gate::cphase(-theta / 2), {control2, target}},
      {Gate::cnot(), {control1, control2}},
      {Gate::cphase(theta / 2), {control1, target}},
  };
}

}  // namespace qnft::sim
