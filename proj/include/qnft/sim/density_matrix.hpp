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

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qnft/sim/gate.hpp"
#include "qnft/sim/state_vector.hpp"

namespace qnft::sim {

inline constexpr int kMaxDensityQubits = 8;

/// Single-qubit depolarizing channel rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z).
/// p = 3/4 maps every input to I/2.
class NoiseChannel {
 public:
  static NoiseChannel depolarizing(double p);

  double probability() const noexcept { return p_; }
  std::vector<Eigen::Matrix2cd> kraus() const;

 private:
  explicit NoiseChannel(double p) : p_(p) {}
  double p_;
};

class DensityMatrix {
 public:
  /// |0...0><0...0| over 1..8 qubits.
  explicit DensityMatrix(int n_qubits);

  /// Validates Hermiticity and unit trace (1e-10).
  static DensityMatrix from_matrix(Eigen::MatrixXcd entries);

  /// Builds from an arbitrary matrix without validation; used for
  /// intermediate estimator output that may not be a valid state yet.
  static DensityMatrix unchecked(Eigen::MatrixXcd entries);

  int num_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return rho_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return rho_(r, c); }

  Complex trace() const { return rho_.trace(); }
  double hermiticity_error() const;
  /// Ascending eigenvalues of the Hermitian part.
  Eigen::VectorXd eigenvalues() const;

  void apply(const Gate& gate, std::span<const int> qubits);
  void apply(const Gate& gate, std::initializer_list<int> qubits) {
    apply(gate, std::span<const int>(qubits.begin(), qubits.size()));
  }
  void apply_matrix(const Eigen::MatrixXcd& u, std::span<const int> qubits);
  void apply_channel(const NoiseChannel& channel, int qubit);

  /// Reduced state on `keep` (ascending new indices follow the order given).
  DensityMatrix partial_trace(std::span<const int> keep) const;

  /// Diagonal of U rho U^dagger where U rotates each qubit into the basis of
  /// `labels` (X, Y or Z per qubit).
  std::vector<double> measurement_probabilities(std::string_view labels) const;

 private:
  DensityMatrix(int n_qubits, Eigen::MatrixXcd entries);
  void apply_both_sides(const Eigen::MatrixXcd& u, std::span<const int> qubits);

  int n_qubits_;
  Eigen::MatrixXcd rho_;
};

DensityMatrix to_density(const StateVector& state);

/// In-place single-qubit depolarizing noise.
void apply_depolarizing(DensityMatrix& rho, double p, int qubit);

/// Tr(rho P). `pauli` has one label per qubit from {I,X,Y,Z}; character j
/// acts on qubit j.
double expectation_pauli(const DensityMatrix& rho, std::string_view pauli);

/// <psi|rho|psi>
double fidelity_pure(const DensityMatrix& rho, const StateVector& psi);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// (1/2) || rho - sigma ||_1
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qnft::sim
