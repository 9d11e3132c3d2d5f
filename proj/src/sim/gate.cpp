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

#include "qnft/sim/gate.hpp"

#include <cmath>
#include <numbers>

#include "qnft/errors.hpp"

namespace qnft::sim {

namespace {

constexpr int kMaxDenseArity = 10;

Eigen::Matrix2cd single_qubit(GateKind kind, double angle) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::Y: m << 0, -i, i, 0; break;
    case GateKind::Z: m << 1, 0, 0, -1; break;
    case GateKind::S: m << 1, 0, 0, i; break;
    case GateKind::Sdg: m << 1, 0, 0, -i; break;
    case GateKind::P: m << 1, 0, 0, std::polar(1.0, angle); break;
    default: throw ParameterError("not a single-qubit gate kind");
  }
  return m;
}

}  // namespace

Gate Gate::mcphase(double theta, int n_controls) {
  if (n_controls < 0) throw ParameterError("mcphase: negative control count");
  return Gate(GateKind::MCP, theta, n_controls);
}

int Gate::num_controls() const noexcept {
  switch (kind_) {
    case GateKind::CNOT:
    case GateKind::CP:
    case GateKind::CSWAP: return 1;
    case GateKind::CCP: return 2;
    case GateKind::MCP: return n_controls_;
    default: return 0;
  }
}

int Gate::arity() const noexcept {
  switch (kind_) {
    case GateKind::CNOT:
    case GateKind::CP:
    case GateKind::SWAP: return 2;
    case GateKind::CCP:
    case GateKind::CSWAP: return 3;
    case GateKind::MCP: return n_controls_ + 1;
    default: return 1;
  }
}

bool Gate::is_diagonal() const noexcept {
  switch (kind_) {
    case GateKind::Z:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::P:
    case GateKind::CP:
    case GateKind::CCP:
    case GateKind::MCP: return true;
    default: return false;
  }
}

Eigen::MatrixXcd Gate::matrix() const {
  const int k = arity();
  if (k > kMaxDenseArity) throw CapacityError("gate matrix too large to materialize: " + name());
  const Eigen::Index dim = Eigen::Index{1} << k;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  switch (kind_) {
    case GateKind::CP:
    case GateKind::CCP:
    case GateKind::MCP:
      u(dim - 1, dim - 1) = std::polar(1.0, angle_);
      break;
    case GateKind::CNOT:
      // operand 0 = control (bit 0), operand 1 = target (bit 1)
      u.setZero();
      u(0, 0) = 1;
      u(2, 2) = 1;
      u(3, 1) = 1;
      u(1, 3) = 1;
      break;
    case GateKind::SWAP:
      u.setZero();
      u(0, 0) = 1;
      u(3, 3) = 1;
      u(1, 2) = 1;
      u(2, 1) = 1;
      break;
    case GateKind::CSWAP:
      // control bit 0 set: exchange bits 1 and 2 (indices 0b011 <-> 0b101)
      u(3, 3) = 0;
      u(5, 5) = 0;
      u(3, 5) = 1;
      u(5, 3) = 1;
      break;
    default:
      u = single_qubit(kind_, angle_);
      break;
  }
  return u;
}

std::string Gate::name() const {
  switch (kind_) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::P: return "P";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CP: return "CP";
    case GateKind::CCP: return "CCP";
    case GateKind::MCP: return "MCP" + std::to_string(n_controls_);
    case GateKind::SWAP: return "SWAP";
    case GateKind::CSWAP: return "CSWAP";
  }
  return "?";
}

}  // namespace qnft::sim
