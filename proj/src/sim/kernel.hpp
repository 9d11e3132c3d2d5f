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

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qnft/sim/gate.hpp"

namespace qnft::sim::detail {

using VectorView = Eigen::Ref<Eigen::VectorXcd, 0, Eigen::InnerStride<>>;

/// Throws IndexError unless `qubits` are distinct, in range, and `expected`
/// in number (expected < 0 skips the count check).
void check_qubits(int n_qubits, std::span<const int> qubits, int expected);

/// Basis offsets of the 2^k local patterns of `qubits`.
std::vector<std::size_t> local_offsets(std::span<const int> qubits);

std::size_t qubit_mask(std::span<const int> qubits);

/// v <- U v on the subspace spanned by `qubits`.
void apply_local(VectorView v, const Eigen::MatrixXcd& u, std::span<const int> qubits);

/// v <- diag-gate v; only the all-ones pattern of `qubits` picks up the phase
/// for controlled phases, single-qubit diagonals use their own entries.
void apply_diagonal(VectorView v, const Gate& gate, std::span<const int> qubits, bool conjugate);

}  // namespace qnft::sim::detail
