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

#include "kernel.hpp"

#include <string>

#include "qnft/errors.hpp"

namespace qnft::sim::detail {

void check_qubits(int n_qubits, std::span<const int> qubits, int expected) {
  if (expected >= 0 && static_cast<int>(qubits.size()) != expected) {
    throw IndexError("expected " + std::to_string(expected) + " qubit operands, got " +
                     std::to_string(qubits.size()));
  }
  std::size_t seen = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw IndexError("qubit " + std::to_string(q) + " out of range for " +
                       std::to_string(n_qubits) + "-qubit register");
    }
    const std::size_t bit = std::size_t{1} << q;
    if (seen & bit) throw IndexError("duplicate qubit operand " + std::to_string(q));
    seen |= bit;
  }
}

std::vector<std::size_t> local_offsets(std::span<const int> qubits) {
  const std::size_t k = qubits.size();
  std::vector<std::size_t> offsets(std::size_t{1} << k, 0);
  for (std::size_t local = 0; local < offsets.size(); ++local) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (local & (std::size_t{1} << j)) off |= std::size_t{1} << qubits[j];
    }
    offsets[local] = off;
  }
  return offsets;
}

std::size_t qubit_mask(std::span<const int> qubits) {
  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << q;
  return mask;
}

void apply_local(VectorView v, const Eigen::MatrixXcd& u, std::span<const int> qubits) {
  const auto offsets = local_offsets(qubits);
  const std::size_t mask = qubit_mask(qubits);
  const std::size_t dim = static_cast<std::size_t>(v.size());
  const Eigen::Index k = static_cast<Eigen::Index>(offsets.size());
  Eigen::VectorXcd in(k);
  Eigen::VectorXcd out(k);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (Eigen::Index l = 0; l < k; ++l) in(l) = v(static_cast<Eigen::Index>(base | offsets[l]));
    out.noalias() = u * in;
    for (Eigen::Index l = 0; l < k; ++l) v(static_cast<Eigen::Index>(base | offsets[l])) = out(l);
  }
}

void apply_diagonal(VectorView v, const Gate& gate, std::span<const int> qubits, bool conjugate) {
  const std::size_t dim = static_cast<std::size_t>(v.size());
  Complex phase;
  switch (gate.kind()) {
    case GateKind::Z: phase = -1.0; break;
    case GateKind::S: phase = Complex{0.0, 1.0}; break;
    case GateKind::Sdg: phase = Complex{0.0, -1.0}; break;
    default: phase = std::polar(1.0, gate.angle()); break;
  }
  if (conjugate) phase = std::conj(phase);
  // Every supported diagonal gate multiplies the all-ones pattern of its
  // operands and leaves the rest untouched.
  const std::size_t mask = qubit_mask(qubits);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & mask) == mask) v(static_cast<Eigen::Index>(i)) *= phase;
  }
}

}  // namespace qnft::sim::detail
