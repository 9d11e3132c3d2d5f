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

#include "qnft/sim/state_vector.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "kernel.hpp"
#include "qnft/errors.hpp"

namespace qnft::sim {

namespace {

constexpr double kNormTolerance = 1e-10;

void check_capacity(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxStateQubits) {
    throw CapacityError("statevector supports 1.." + std::to_string(kMaxStateQubits) +
                        " qubits, requested " + std::to_string(n_qubits));
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_capacity(n_qubits);
  amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amps_(0) = 1.0;
}

StateVector::StateVector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {}

StateVector StateVector::from_amplitudes(Eigen::VectorXcd amplitudes) {
  const auto size = static_cast<std::size_t>(amplitudes.size());
  if (size < 2 || (size & (size - 1)) != 0) {
    throw ParameterError("amplitude vector length must be a power of two >= 2");
  }
  const int n = std::countr_zero(size);
  check_capacity(n);
  if (std::abs(amplitudes.squaredNorm() - 1.0) > kNormTolerance) {
    throw ParameterError("amplitude vector is not normalized");
  }
  return StateVector(n, std::move(amplitudes));
}

void StateVector::apply(const Gate& gate, std::span<const int> qubits) {
  detail::check_qubits(n_qubits_, qubits, gate.arity());
  if (gate.is_diagonal()) {
    detail::apply_diagonal(amps_, gate, qubits, false);
  } else {
    detail::apply_local(amps_, gate.matrix(), qubits);
  }
}

void StateVector::apply_matrix(const Eigen::MatrixXcd& u, std::span<const int> qubits) {
  detail::check_qubits(n_qubits_, qubits, -1);
  const Eigen::Index expected = Eigen::Index{1} << qubits.size();
  if (u.rows() != expected || u.cols() != expected) {
    throw ParameterError("matrix dimension does not match operand count");
  }
  detail::apply_local(amps_, u, qubits);
}

StateVector StateVector::tensor(const StateVector& high) const {
  const int n = n_qubits_ + high.n_qubits_;
  check_capacity(n);
  Eigen::VectorXcd out(Eigen::Index{1} << n);
  const Eigen::Index low_dim = amps_.size();
  for (Eigen::Index h = 0; h < high.amps_.size(); ++h) {
    out.segment(h * low_dim, low_dim) = high.amps_(h) * amps_;
  }
  return StateVector(n, std::move(out));
}

std::vector<double> StateVector::marginal_probabilities(std::span<const int> qubits) const {
  detail::check_qubits(n_qubits_, qubits, -1);
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    std::size_t outcome = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if ((static_cast<std::size_t>(i) >> qubits[j]) & 1U) outcome |= std::size_t{1} << j;
    }
    probs[outcome] += std::norm(amps_(i));
  }
  return probs;
}

void StateVector::collapse(std::span<const int> qubits, std::size_t outcome) {
  detail::check_qubits(n_qubits_, qubits, -1);
  const std::size_t mask = detail::qubit_mask(qubits);
  const std::size_t pattern = detail::local_offsets(qubits).at(outcome);
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if ((static_cast<std::size_t>(i) & mask) != pattern) amps_(i) = 0.0;
  }
  const double norm = amps_.norm();
  if (norm < 1e-300) throw ParameterError("collapse onto a zero-probability outcome");
  amps_ /= norm;
}

std::size_t StateVector::measure(std::span<const int> qubits, Rng& rng) {
  const auto probs = marginal_probabilities(qubits);
  const std::size_t outcome = rng.pick(probs);
  collapse(qubits, outcome);
  return outcome;
}

std::vector<std::size_t> StateVector::sample(std::span<const int> qubits, std::size_t shots,
                                             Rng& rng) const {
  const auto probs = marginal_probabilities(qubits);
  std::vector<std::size_t> counts(probs.size(), 0);
  for (std::size_t s = 0; s < shots; ++s) ++counts[rng.pick(probs)];
  return counts;
}

std::string StateVector::dump() const {
  std::ostringstream out;
  char line[96];
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    std::snprintf(line, sizeof line, "%lld %.17g %.17g\n", static_cast<long long>(i),
                  amps_(i).real(), amps_(i).imag());
    out << line;
  }
  return out.str();
}

StateVector new_state(int n_qubits) { return StateVector(n_qubits); }

void bell_pair(StateVector& state, int qubit_a, int qubit_b) {
  const int ops[] = {qubit_a, qubit_b};
  detail::check_qubits(state.num_qubits(), ops, 2);
  const auto marginal = state.marginal_probabilities(ops);
  if (marginal[0] < 1.0 - kNormTolerance) {
    throw ParameterError("bell_pair: operand qubits are not in |00>");
  }
  state.apply(Gate::h(), {qubit_a});
  state.apply(Gate::cnot(), {qubit_a, qubit_b});
}

int measure_computational(StateVector& state, int qubit, Rng& rng) {
  const int ops[] = {qubit};
  return static_cast<int>(state.measure(ops, rng));
}

std::string to_string(BlockOutcome outcome) {
  switch (outcome) {
    case BlockOutcome::Plus: return "plus";
    case BlockOutcome::Minus: return "minus";
    case BlockOutcome::Leak01: return "leak01";
    case BlockOutcome::Leak10: return "leak10";
  }
  return "?";
}

Eigen::Matrix4cd block_basis(double theta) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex ph = std::polar(1.0, theta);
  Eigen::Matrix4cd v = Eigen::Matrix4cd::Zero();
  v(0, 0) = r;
  v(3, 0) = r * ph;
  v(1, 1) = 1.0;  // bit_a = 1, bit_b = 0
  v(2, 2) = 1.0;  // bit_a = 0, bit_b = 1
  v(0, 3) = r;
  v(3, 3) = -r * ph;
  return v;
}

namespace {

// local computational index after rotating by block_basis^dagger
BlockOutcome outcome_of_local(std::size_t local) {
  switch (local) {
    case 0: return BlockOutcome::Plus;
    case 1: return BlockOutcome::Leak10;
    case 2: return BlockOutcome::Leak01;
    default: return BlockOutcome::Minus;
  }
}

}  // namespace

std::array<double, 4> block_basis_probabilities(const StateVector& state, int qubit_a, int qubit_b,
                                                double theta) {
  if (!std::isfinite(theta)) throw ParameterError("verification phase must be finite");
  const int ops[] = {qubit_a, qubit_b};
  StateVector rotated = state;
  rotated.apply_matrix(block_basis(theta).adjoint(), ops);
  const auto local = rotated.marginal_probabilities(ops);
  std::array<double, 4> probs{};
  for (std::size_t l = 0; l < 4; ++l) probs[static_cast<std::size_t>(outcome_of_local(l))] = local[l];
  return probs;
}

BlockOutcome measure_in_block_basis(StateVector& state, int qubit_a, int qubit_b, double theta,
                                    Rng& rng) {
  if (!std::isfinite(theta)) throw ParameterError("verification phase must be finite");
  const int ops[] = {qubit_a, qubit_b};
  const Eigen::Matrix4cd v = block_basis(theta);
  state.apply_matrix(v.adjoint(), ops);
  const std::size_t local = state.measure(ops, rng);
  state.apply_matrix(v, ops);
  return outcome_of_local(local);
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw ParameterError("inner product of registers with different widths");
  return a.amplitudes().dot(b.amplitudes());
}

}  // namespace qnft::sim
