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

#include "qnft/sim/density_matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "kernel.hpp"
#include "qnft/errors.hpp"

namespace qnft::sim {

namespace {

constexpr double kTolerance = 1e-10;

void check_capacity(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxDensityQubits) {
    throw CapacityError("density matrix supports 1.." + std::to_string(kMaxDensityQubits) +
                        " qubits, requested " + std::to_string(n_qubits));
  }
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

NoiseChannel NoiseChannel::depolarizing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("depolarizing probability must lie in [0, 1]");
  return NoiseChannel(p);
}

std::vector<Eigen::Matrix2cd> NoiseChannel::kraus() const {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  const double a = std::sqrt(1.0 - p_);
  const double b = std::sqrt(p_ / 3.0);
  return {a * id, b * x, b * y, b * z};
}

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
  check_capacity(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  rho_ = Eigen::MatrixXcd::Zero(dim, dim);
  rho_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(int n_qubits, Eigen::MatrixXcd entries)
    : n_qubits_(n_qubits), rho_(std::move(entries)) {}

DensityMatrix DensityMatrix::unchecked(Eigen::MatrixXcd entries) {
  const auto size = static_cast<std::size_t>(entries.rows());
  if (entries.rows() != entries.cols() || size < 2 || (size & (size - 1)) != 0) {
    throw ParameterError("density matrix must be square with power-of-two dimension");
  }
  const int n = std::countr_zero(size);
  check_capacity(n);
  return DensityMatrix(n, std::move(entries));
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd entries) {
  DensityMatrix rho = unchecked(std::move(entries));
  if (rho.hermiticity_error() > kTolerance) throw ParameterError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > kTolerance) {
    throw ParameterError("density matrix trace differs from 1");
  }
  return rho;
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  const Eigen::MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues();
}

void DensityMatrix::apply_both_sides(const Eigen::MatrixXcd& u, std::span<const int> qubits) {
  const Eigen::MatrixXcd uc = u.conjugate();
  for (Eigen::Index c = 0; c < rho_.cols(); ++c) detail::apply_local(rho_.col(c), u, qubits);
  for (Eigen::Index r = 0; r < rho_.rows(); ++r) {
    detail::apply_local(rho_.row(r).transpose(), uc, qubits);
  }
}

void DensityMatrix::apply(const Gate& gate, std::span<const int> qubits) {
  detail::check_qubits(n_qubits_, qubits, gate.arity());
  if (gate.is_diagonal()) {
    for (Eigen::Index c = 0; c < rho_.cols(); ++c) {
      detail::apply_diagonal(rho_.col(c), gate, qubits, false);
    }
    for (Eigen::Index r = 0; r < rho_.rows(); ++r) {
      detail::apply_diagonal(rho_.row(r).transpose(), gate, qubits, true);
    }
    return;
  }
  apply_both_sides(gate.matrix(), qubits);
}

void DensityMatrix::apply_matrix(const Eigen::MatrixXcd& u, std::span<const int> qubits) {
  detail::check_qubits(n_qubits_, qubits, -1);
  const Eigen::Index expected = Eigen::Index{1} << qubits.size();
  if (u.rows() != expected || u.cols() != expected) {
    throw ParameterError("matrix dimension does not match operand count");
  }
  apply_both_sides(u, qubits);
}

void DensityMatrix::apply_channel(const NoiseChannel& channel, int qubit) {
  const int ops[] = {qubit};
  detail::check_qubits(n_qubits_, ops, 1);
  if (channel.probability() == 0.0) return;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho_.rows(), rho_.cols());
  for (const auto& k : channel.kraus()) {
    DensityMatrix term(n_qubits_, rho_);
    term.apply_both_sides(k, ops);
    acc += term.rho_;
  }
  rho_ = std::move(acc);
}

DensityMatrix DensityMatrix::partial_trace(std::span<const int> keep) const {
  detail::check_qubits(n_qubits_, keep, -1);
  if (keep.empty()) throw ParameterError("partial trace must keep at least one qubit");
  const std::size_t keep_mask = detail::qubit_mask(keep);
  const Eigen::Index out_dim = Eigen::Index{1} << keep.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
  auto reduce = [&](std::size_t full) {
    Eigen::Index local = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) {
      if ((full >> keep[j]) & 1U) local |= Eigen::Index{1} << j;
    }
    return local;
  };
  const auto dim = static_cast<std::size_t>(rho_.rows());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & ~keep_mask) != (j & ~keep_mask)) continue;
      out(reduce(i), reduce(j)) += rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return DensityMatrix(static_cast<int>(keep.size()), std::move(out));
}

std::vector<double> DensityMatrix::measurement_probabilities(std::string_view labels) const {
  if (static_cast<int>(labels.size()) != n_qubits_) {
    throw ParameterError("measurement basis string length differs from qubit count");
  }
  DensityMatrix rotated = *this;
  for (int q = 0; q < n_qubits_; ++q) {
    switch (labels[static_cast<std::size_t>(q)]) {
      case 'Z': break;
      case 'X': rotated.apply(Gate::h(), {q}); break;
      case 'Y':
        rotated.apply(Gate::sdg(), {q});
        rotated.apply(Gate::h(), {q});
        break;
      default: throw ParameterError(std::string("bad measurement basis label '") + labels[q] + "'");
    }
  }
  std::vector<double> probs(static_cast<std::size_t>(rotated.dim()));
  for (Eigen::Index i = 0; i < rotated.dim(); ++i) {
    probs[static_cast<std::size_t>(i)] = std::max(0.0, rotated.rho_(i, i).real());
  }
  return probs;
}

DensityMatrix to_density(const StateVector& state) {
  const auto& a = state.amplitudes();
  return DensityMatrix::from_matrix(a * a.adjoint());
}

void apply_depolarizing(DensityMatrix& rho, double p, int qubit) {
  rho.apply_channel(NoiseChannel::depolarizing(p), qubit);
}

double expectation_pauli(const DensityMatrix& rho, std::string_view pauli) {
  if (static_cast<int>(pauli.size()) != rho.num_qubits()) {
    throw ParameterError("Pauli string length differs from qubit count");
  }
  std::size_t flip = 0;
  for (std::size_t q = 0; q < pauli.size(); ++q) {
    switch (pauli[q]) {
      case 'I':
      case 'Z': break;
      case 'X':
      case 'Y': flip |= std::size_t{1} << q; break;
      default: throw ParameterError(std::string("bad Pauli label '") + pauli[q] + "'");
    }
  }
  // P|j> = c_j |j ^ flip>, so Tr(rho P) = sum_j c_j rho(j, j ^ flip).
  Complex total = 0.0;
  const auto dim = static_cast<std::size_t>(rho.dim());
  for (std::size_t j = 0; j < dim; ++j) {
    Complex c = 1.0;
    for (std::size_t q = 0; q < pauli.size(); ++q) {
      const bool bit = (j >> q) & 1U;
      switch (pauli[q]) {
        case 'Z':
          if (bit) c = -c;
          break;
        case 'Y': c *= bit ? Complex{0.0, -1.0} : Complex{0.0, 1.0}; break;
        default: break;
      }
    }
    total += c * rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ flip));
  }
  return total.real();
}

double fidelity_pure(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dim() != static_cast<Eigen::Index>(psi.dim())) {
    throw ParameterError("fidelity: dimension mismatch");
  }
  const auto& v = psi.amplitudes();
  return v.dot(rho.matrix() * v).real();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ParameterError("fidelity: dimension mismatch");
  const Eigen::MatrixXcd root = hermitian_sqrt(0.5 * (rho.matrix() + rho.matrix().adjoint()));
  Eigen::MatrixXcd inner = root * sigma.matrix() * root;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  const double s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return s * s;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ParameterError("trace distance: dimension mismatch");
  Eigen::MatrixXcd diff = rho.matrix() - sigma.matrix();
  diff = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qnft::sim
