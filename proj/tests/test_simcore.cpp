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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "oracle/dense.hpp"
#include "qnft/errors.hpp"
#include "qnft/rng.hpp"
#include "qnft/sim/circuit.hpp"
#include "qnft/sim/density_matrix.hpp"
#include "qnft/sim/state_vector.hpp"
#include "support.hpp"

using namespace qnft;
using namespace qnft::sim;
using std::numbers::pi;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

double max_dev(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

StateVector block_state(double theta) {
  StateVector s(2);
  bell_pair(s, 0, 1);
  s.apply(Gate::phase(theta), {0});
  return s;
}

/// Columns = action of `ops` on every basis state.
Eigen::MatrixXcd unitary_of(int n, const std::vector<Operation>& ops) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::MatrixXcd u(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
    e(col) = 1.0;
    StateVector s = StateVector::from_amplitudes(e);
    for (const auto& op : ops) s.apply(op.gate, op.qubits);
    u.col(col) = s.amplitudes();
  }
  return u;
}

}  // namespace

TEST_CASE("new_state prepares the ground state and enforces capacity") {
  CHECK(new_state(1).amplitudes().isApprox(Eigen::Vector2cd(1, 0)));
  const auto s2 = new_state(2);
  REQUIRE(s2.dim() == 4);
  CHECK(s2.amplitude(0) == Complex(1, 0));
  CHECK(std::abs(s2.amplitude(1)) + std::abs(s2.amplitude(2)) + std::abs(s2.amplitude(3)) == 0.0);
  CHECK_THROWS_AS(new_state(17), CapacityError);
  CHECK_THROWS_AS(new_state(0), CapacityError);
  CHECK_NOTHROW(new_state(16));
}

TEST_CASE("single-qubit gate definitions") {
  StateVector s(1);
  s.apply(Gate::h(), {0});
  CHECK(std::abs(s.amplitude(0) - kR) < 1e-15);
  CHECK(std::abs(s.amplitude(1) - kR) < 1e-15);

  StateVector one(1);
  one.apply(Gate::x(), {0});
  one.apply(Gate::phase(pi / 4), {0});
  CHECK(std::abs(one.amplitude(1) - std::polar(1.0, pi / 4)) < 1e-15);
  CHECK(std::abs(one.amplitude(0)) == 0.0);
}

TEST_CASE("operand validation") {
  StateVector s(3);
  CHECK_THROWS_AS(s.apply(Gate::cnot(), {0, 0}), IndexError);
  CHECK_THROWS_AS(s.apply(Gate::h(), {3}), IndexError);
  CHECK_THROWS_AS(s.apply(Gate::h(), {-1}), IndexError);
  CHECK_THROWS_AS(s.apply(Gate::ccphase(1.0), {0, 1}), IndexError);
  CHECK_THROWS_AS(bell_pair(s, 1, 1), IndexError);
}

TEST_CASE("every gate matrix is unitary") {
  const std::vector<Gate> gates = {
      Gate::h(),         Gate::x(),           Gate::y(),          Gate::z(),
      Gate::s(),         Gate::sdg(),         Gate::phase(0.3),   Gate::cnot(),
      Gate::cphase(1.1), Gate::ccphase(-2.0), Gate::mcphase(pi / 2, 3),
      Gate::mcphase(0.7, 4), Gate::swap(),    Gate::cswap()};
  for (const auto& g : gates) {
    const auto u = g.matrix();
    const auto eye = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    CAPTURE(g.name());
    CHECK(max_dev(u.adjoint() * u, eye) < 1e-12);
  }
}

TEST_CASE("gate application matches the dense oracle on random states") {
  Rng rng(11);
  const int n = 4;
  Eigen::VectorXcd v(16);
  for (auto& a : v) a = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  v.normalize();

  struct Case {
    Gate gate;
    std::vector<int> qubits;
    Eigen::MatrixXcd dense;
  };
  const std::vector<Case> cases = {
      {Gate::h(), {2}, oracle::embed(oracle::h2(), 2, n)},
      {Gate::phase(0.4), {3}, oracle::embed(oracle::p2(0.4), 3, n)},
      {Gate::cnot(), {3, 1}, oracle::cnot(n, 3, 1)},
      {Gate::cphase(0.9), {0, 2}, oracle::controlled_phase(n, {0, 2}, 0.9)},
      {Gate::swap(), {1, 3}, oracle::swap(n, 1, 3)},
      {Gate::cswap(), {2, 0, 3}, oracle::cswap(n, 2, 0, 3)},
  };
  for (const auto& c : cases) {
    StateVector s = StateVector::from_amplitudes(v);
    s.apply(c.gate, c.qubits);
    CAPTURE(c.gate.name());
    CHECK(max_dev(s.amplitudes(), c.dense * v) < 1e-12);
  }
}

TEST_CASE("CCP decomposition equals the direct diagonal") {
  for (double theta : {pi / 2, pi / 4, pi}) {
    const auto decomposed = unitary_of(3, ccphase_decomposition(theta, 0, 1, 2));
    const auto direct = oracle::controlled_phase(3, {0, 1, 2}, theta);
    CAPTURE(theta);
    CHECK(max_dev(decomposed, direct) < 1e-12);
    const auto via_gate = unitary_of(3, {{Gate::ccphase(theta), {0, 1, 2}}});
    CHECK(max_dev(via_gate, direct) < 1e-12);
  }
}

TEST_CASE("MCP equals the brute-force diagonal for up to four controls") {
  for (int k = 1; k <= 4; ++k) {
    const int n = k + 1;
    std::vector<int> qubits;
    for (int q = n - 1; q >= 0; --q) qubits.push_back(q);
    const auto u = unitary_of(n, {{Gate::mcphase(pi / 2, k), qubits}});
    CHECK(max_dev(u, oracle::controlled_phase(n, qubits, pi / 2)) < 1e-12);
    CHECK(max_dev(Gate::mcphase(pi / 2, k).matrix(),
                  oracle::controlled_phase(n, qubits, pi / 2)) < 1e-12);
  }
}

TEST_CASE("bell_pair examples") {
  StateVector two(2);
  bell_pair(two, 0, 1);
  CHECK(max_dev(two.amplitudes(), Eigen::Vector4cd(kR, 0, 0, kR)) < 1e-15);

  StateVector four(4);
  bell_pair(four, 0, 1);
  for (std::size_t i = 0; i < 16; ++i) {
    const double expected = (i == 0 || i == 3) ? kR : 0.0;
    CHECK(std::abs(four.amplitude(i) - expected) < 1e-15);
  }

  // two disjoint pairs: tensor product of two Bell states
  bell_pair(four, 2, 3);
  const Eigen::VectorXcd bell = Eigen::Vector4cd(kR, 0, 0, kR);
  const Eigen::VectorXcd expected = oracle::kron(bell, bell);
  CHECK(max_dev(four.amplitudes(), expected) < 1e-15);
  for (std::size_t i : {0U, 3U, 12U, 15U}) CHECK(std::abs(four.amplitude(i) - 0.5) < 1e-15);

  StateVector busy(2);
  busy.apply(Gate::x(), {1});
  CHECK_THROWS_AS(bell_pair(busy, 0, 1), ParameterError);
}

TEST_CASE("computational measurement") {
  SUBCASE("|+> is fair") {
    Rng rng(2024);
    std::size_t ones = 0;
    const std::size_t trials = 100000;
    for (std::size_t t = 0; t < trials; ++t) {
      StateVector s(1);
      s.apply(Gate::h(), {0});
      ones += static_cast<std::size_t>(measure_computational(s, 0, rng));
    }
    CHECK(testing::within_sigma(ones, trials, 0.5));
  }
  SUBCASE("|1> is deterministic") {
    Rng rng(1);
    for (int t = 0; t < 100; ++t) {
      StateVector s(1);
      s.apply(Gate::x(), {0});
      CHECK(measure_computational(s, 0, rng) == 1);
      CHECK(std::abs(s.amplitude(1) - 1.0) < 1e-15);
    }
  }
  SUBCASE("Bell correlation") {
    Rng rng(5);
    int seen_one = 0;
    for (int t = 0; t < 64; ++t) {
      StateVector s(2);
      bell_pair(s, 0, 1);
      if (measure_computational(s, 0, rng) == 1) {
        ++seen_one;
        CHECK(std::abs(s.amplitude(3) - 1.0) < 1e-12);
        CHECK(measure_computational(s, 1, rng) == 1);
      }
    }
    CHECK(seen_one > 0);
  }
}

TEST_CASE("seeded measurement records are reproducible") {
  auto record = [](std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> bits;
    for (int t = 0; t < 200; ++t) {
      StateVector s(3);
      s.apply(Gate::h(), {0});
      s.apply(Gate::h(), {2});
      s.apply(Gate::cnot(), {2, 1});
      for (int q = 0; q < 3; ++q) bits.push_back(measure_computational(s, q, rng));
    }
    return bits;
  };
  CHECK(record(99) == record(99));
  CHECK(record(99) != record(100));
}

TEST_CASE("block-basis measurement") {
  Rng rng(7);
  SUBCASE("eigenstate always passes") {
    for (double theta : {0.0, pi / 8, 3 * pi / 16, 2.5}) {
      for (int t = 0; t < 50; ++t) {
        auto s = block_state(theta);
        CHECK(measure_in_block_basis(s, 0, 1, theta, rng) == BlockOutcome::Plus);
      }
    }
  }
  SUBCASE("mismatched phase follows cos^2 of half the offset") {
    const double claimed = 0.3;
    for (double actual : {0.3 + pi / 4, 0.3 + pi / 2, 0.3 + pi, 0.3 - 1.0}) {
      const auto psi = block_state(actual);
      const auto probs = block_basis_probabilities(psi, 0, 1, claimed);
      // symbolic inner product <+_claimed | psi>
      const Complex overlap = 0.5 * (1.0 + std::polar(1.0, actual - claimed));
      CHECK(std::abs(probs[0] - std::norm(overlap)) < 1e-12);
      CHECK(std::abs(probs[0] - std::pow(std::cos((actual - claimed) / 2), 2)) < 1e-12);
      CHECK(probs[2] + probs[3] < 1e-15);

      std::size_t plus = 0;
      const std::size_t trials = 20000;
      for (std::size_t t = 0; t < trials; ++t) {
        auto s = psi;
        if (measure_in_block_basis(s, 0, 1, claimed, rng) == BlockOutcome::Plus) ++plus;
      }
      CHECK(testing::within_sigma(plus, trials, probs[0]));
    }
  }
  SUBCASE("leak outcomes") {
    StateVector s01(2);
    s01.apply(Gate::x(), {1});  // qubit_a = 0, qubit_b = 1
    CHECK(measure_in_block_basis(s01, 0, 1, 0.4, rng) == BlockOutcome::Leak01);
    StateVector s10(2);
    s10.apply(Gate::x(), {0});
    CHECK(measure_in_block_basis(s10, 0, 1, 0.4, rng) == BlockOutcome::Leak10);
  }
  SUBCASE("collapse lands on the measured basis vector") {
    auto s = block_state(pi / 2);
    const auto outcome = measure_in_block_basis(s, 0, 1, 0.0, rng);
    const Eigen::Matrix4cd v = block_basis(0.0);
    const Eigen::Index col = outcome == BlockOutcome::Plus ? 0 : 3;
    CHECK(std::abs(std::abs(v.col(col).dot(s.amplitudes())) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(block_basis_probabilities(block_state(0), 0, 1, std::nan("")), ParameterError);
}

TEST_CASE("to_density examples") {
  const auto zero = to_density(StateVector(1));
  CHECK(max_dev(zero.matrix(), Eigen::Matrix2cd{{1, 0}, {0, 0}}) == 0.0);

  StateVector plus(1);
  plus.apply(Gate::h(), {0});
  CHECK(max_dev(to_density(plus).matrix(), Eigen::Matrix2cd::Constant(0.5)) < 1e-15);

  StateVector bell(2);
  bell_pair(bell, 0, 1);
  const auto rho = to_density(bell);
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c) {
      const bool corner = (r == 0 || r == 3) && (c == 0 || c == 3);
      CHECK(std::abs(rho(r, c) - (corner ? 0.5 : 0.0)) < 1e-15);
    }
}

TEST_CASE("depolarizing channel") {
  SUBCASE("Kraus completeness") {
    for (double p : {0.0, 0.1, 0.5, 0.75, 1.0}) {
      Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
      for (const auto& k : NoiseChannel::depolarizing(p).kraus()) sum += k.adjoint() * k;
      CHECK(max_dev(sum, Eigen::Matrix2cd::Identity()) < 1e-12);
    }
  }
  SUBCASE("p = 0 is the identity") {
    StateVector s(2);
    s.apply(Gate::h(), {0});
    s.apply(Gate::phase(0.3), {0});
    auto rho = to_density(s);
    const auto before = rho.matrix();
    apply_depolarizing(rho, 0.0, 0);
    CHECK(max_dev(rho.matrix(), before) == 0.0);
  }
  SUBCASE("p = 3/4 fully depolarizes") {
    StateVector s(1);
    s.apply(Gate::h(), {0});
    s.apply(Gate::phase(1.2), {0});
    auto rho = to_density(s);
    apply_depolarizing(rho, 0.75, 0);
    CHECK(max_dev(rho.matrix(), 0.5 * Eigen::Matrix2cd::Identity()) < 1e-12);
  }
  SUBCASE("p = 0.1 on |0><0|") {
    // direct Kraus sum: (1-p)|0><0| + (p/3)(|1><1| + |1><1| + |0><0|)
    const double p = 0.1;
    const double expected0 = (1 - p) + p / 3;
    const double expected1 = 2 * p / 3;
    auto rho = to_density(StateVector(1));
    apply_depolarizing(rho, p, 0);
    CHECK(std::abs(rho(0, 0).real() - expected0) < 1e-12);
    CHECK(std::abs(rho(1, 1).real() - expected1) < 1e-12);
    CHECK(std::abs(expected0 - 0.9333333333333333) < 1e-12);
    CHECK(std::abs(fidelity_pure(rho, StateVector(1)) - expected0) < 1e-12);
  }
  SUBCASE("trace and positivity on a noisy register") {
    StateVector s(3);
    s.apply(Gate::h(), {0});
    s.apply(Gate::cnot(), {0, 2});
    s.apply(Gate::phase(0.7), {2});
    auto rho = to_density(s);
    for (int q = 0; q < 3; ++q) apply_depolarizing(rho, 0.2 + 0.1 * q, q);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
    CHECK(rho.hermiticity_error() < 1e-10);
    CHECK(rho.eigenvalues().minCoeff() > -1e-8);
  }
  DensityMatrix rho(1);
  CHECK_THROWS_AS(apply_depolarizing(rho, 1.5, 0), ParameterError);
  CHECK_THROWS_AS(apply_depolarizing(rho, -0.1, 0), ParameterError);
}

TEST_CASE("Pauli expectations") {
  CHECK(expectation_pauli(DensityMatrix(1), "Z") == doctest::Approx(1.0));
  StateVector bell(2);
  bell_pair(bell, 0, 1);
  const auto rho = to_density(bell);
  CHECK(expectation_pauli(rho, "XX") == doctest::Approx(1.0));
  CHECK(expectation_pauli(rho, "YY") == doctest::Approx(-1.0));
  CHECK(expectation_pauli(rho, "ZZ") == doctest::Approx(1.0));
  CHECK(expectation_pauli(rho, "IZ") == doctest::Approx(0.0));
  for (double theta : {0.0, 0.4, pi / 2, 2.9}) {
    CHECK(std::abs(expectation_pauli(to_density(block_state(theta)), "ZZ") - 1.0) < 1e-12);
    // <XX> = cos(theta), <XY> = sin(theta)
    CHECK(std::abs(expectation_pauli(to_density(block_state(theta)), "XX") - std::cos(theta)) <
          1e-12);
    CHECK(std::abs(expectation_pauli(to_density(block_state(theta)), "XY") - std::sin(theta)) <
          1e-12);
  }
  CHECK_THROWS_AS(expectation_pauli(rho, "XQ"), ParameterError);
  CHECK_THROWS_AS(expectation_pauli(rho, "X"), ParameterError);
}

TEST_CASE("pure-target fidelity") {
  StateVector psi(2);
  psi.apply(Gate::h(), {1});
  psi.apply(Gate::phase(0.2), {1});
  CHECK(fidelity_pure(to_density(psi), psi) == doctest::Approx(1.0));
  const auto mixed = DensityMatrix::from_matrix(0.5 * Eigen::Matrix2cd::Identity());
  StateVector one(1);
  one.apply(Gate::h(), {0});
  CHECK(fidelity_pure(mixed, one) == doctest::Approx(0.5));
  CHECK_THROWS_AS(fidelity_pure(mixed, psi), ParameterError);
  // Uhlmann form reduces to the pure-target form
  CHECK(fidelity(mixed, to_density(one)) == doctest::Approx(0.5));
}

TEST_CASE("norm is preserved by random circuits") {
  Rng rng(3);
  StateVector s(5);
  const std::vector<Gate> pool = {Gate::h(), Gate::phase(0.3), Gate::cnot(), Gate::cphase(1.7),
                                  Gate::ccphase(pi / 2), Gate::swap(), Gate::cswap()};
  for (int step = 0; step < 400; ++step) {
    const auto& g = pool[static_cast<std::size_t>(rng.next_u64() % pool.size())];
    std::vector<int> qubits;
    while (static_cast<int>(qubits.size()) < g.arity()) {
      const int q = static_cast<int>(rng.next_u64() % 5);
      if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) qubits.push_back(q);
    }
    s.apply(g, qubits);
    REQUIRE(std::abs(s.norm_squared() - 1.0) < 1e-10);
  }
}

TEST_CASE("partial trace and trace distance") {
  StateVector bell(2);
  bell_pair(bell, 0, 1);
  const int keep[] = {0};
  const auto reduced = to_density(bell).partial_trace(keep);
  CHECK(max_dev(reduced.matrix(), 0.5 * Eigen::Matrix2cd::Identity()) < 1e-15);
  CHECK(trace_distance(reduced, DensityMatrix(1)) == doctest::Approx(0.5));
}

TEST_CASE("debug dump is one record per amplitude") {
  StateVector s(2);
  bell_pair(s, 0, 1);
  CHECK(s.dump() ==
        "0 0.70710678118654746 0\n1 0 0\n2 0 0\n3 0.70710678118654746 0\n");
}
