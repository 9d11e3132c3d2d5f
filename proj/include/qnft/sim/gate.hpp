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

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace qnft::sim {

using Complex = std::complex<double>;

enum class GateKind { H, X, Y, Z, S, Sdg, P, CNOT, CP, CCP, MCP, SWAP, CSWAP };

/// A gate together with its parameters. Qubit operands are supplied at
/// application time; for controlled kinds the controls come first and the
/// target last (CSWAP: control, then the two swapped qubits).
class Gate {
 public:
  static Gate h() { return Gate(GateKind::H); }
  static Gate x() { return Gate(GateKind::X); }
  static Gate y() { return Gate(GateKind::Y); }
  static Gate z() { return Gate(GateKind::Z); }
  static Gate s() { return Gate(GateKind::S); }
  static Gate sdg() { return Gate(GateKind::Sdg); }
  static Gate phase(double theta) { return Gate(GateKind::P, theta); }
  static Gate cnot() { return Gate(GateKind::CNOT); }
  static Gate cphase(double theta) { return Gate(GateKind::CP, theta); }
  static Gate ccphase(double theta) { return Gate(GateKind::CCP, theta); }
  /// Phase e^{i theta} on the all-ones pattern of `n_controls` controls + target.
  static Gate mcphase(double theta, int n_controls);
  static Gate swap() { return Gate(GateKind::SWAP); }
  static Gate cswap() { return Gate(GateKind::CSWAP); }

  GateKind kind() const noexcept { return kind_; }
  double angle() const noexcept { return angle_; }
  int num_controls() const noexcept;

  /// Number of qubit operands.
  int arity() const noexcept;

  /// True when the unitary is diagonal in the computational basis.
  bool is_diagonal() const noexcept;

  /// Dense 2^arity unitary. Local basis index bit j is operand j.
  Eigen::MatrixXcd matrix() const;

  std::string name() const;

 private:
  explicit Gate(GateKind kind, double angle = 0.0, int n_controls = 0)
      : kind_(kind), angle_(angle), n_controls_(n_controls) {}

  GateKind kind_;
  double angle_;
  int n_controls_;
};

}  // namespace qnft::sim
