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
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracle/dense.hpp"
#include "qnft/chain_log.hpp"
#include "qnft/errors.hpp"
#include "qnft/ledger.hpp"
#include "qnft/sim/density_matrix.hpp"

using namespace qnft;
using namespace qnft::ledger;
using std::numbers::pi;

namespace {

Block block(int m, double a, double b) {
  Block blk;
  blk.index = m;
  blk.theta_a = a;
  blk.theta_b = b;
  return blk;
}

ChainState build(const std::vector<std::pair<double, double>>& phases, ChainOptions opts = {}) {
  ChainState chain({}, opts);
  for (std::size_t i = 0; i < phases.size(); ++i) {
    chain.append(block(static_cast<int>(i) + 1, phases[i].first, phases[i].second));
  }
  return chain;
}

double max_dev(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

bool in_bell_support(Eigen::Index index, int blocks) {
  for (int m = 0; m < blocks; ++m) {
    const auto pair = (index >> (2 * m)) & 3;
    if (pair == 1 || pair == 2) return false;
  }
  return true;
}

Eigen::VectorXcd read_golden(const std::string& name) {
  std::ifstream in(std::string(QNFT_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::vector<std::complex<double>> amps;
  long long idx = 0;
  double re = 0;
  double im = 0;
  while (in >> idx >> re >> im) {
    REQUIRE(idx == static_cast<long long>(amps.size()));
    amps.emplace_back(re, im);
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
  return v;
}

}  // namespace

TEST_CASE("block state carries the summed phase") {
  const double r = 1.0 / std::sqrt(2.0);
  auto plain = create_block_state(block(1, 0, 0));
  CHECK(std::abs(plain.amplitude(0) - r) < 1e-15);
  CHECK(std::abs(plain.amplitude(3) - r) < 1e-15);

  for (auto [a, b] : {std::pair{pi / 16, pi / 16}, std::pair{pi / 2, pi / 4}}) {
    auto s = create_block_state(block(1, a, b));
    CHECK(std::abs(s.amplitude(1)) < 1e-15);
    CHECK(std::abs(s.amplitude(2)) < 1e-15);
    CHECK(std::arg(s.amplitude(3) / s.amplitude(0)) == doctest::Approx(a + b).epsilon(1e-12));
  }
  CHECK(std::arg(create_block_state(block(1, pi / 16, pi / 16)).amplitude(3)) ==
        doctest::Approx(pi / 8));
  CHECK(std::arg(create_block_state(block(1, pi / 2, pi / 4)).amplitude(3)) ==
        doctest::Approx(3 * pi / 4));

  CHECK_THROWS_AS(create_block_state(block(1, pi / 2, pi / 2)), ConstraintError);
  CHECK_NOTHROW(create_block_state(block(1, pi / 2, pi / 2), false));
}

TEST_CASE("first append has no entangling gate") {
  ChainState chain;
  CHECK(!closed_form(chain).has_value());
  chain.append(block(1, pi / 16, pi / 16));
  CHECK(link_operations(1, chain.options()).empty());
  CHECK(max_dev(chain.register_state()->amplitudes(),
                create_block_state(block(1, pi / 16, pi / 16)).amplitudes()) == 0.0);
}

TEST_CASE("second block links with one CP per class") {
  const auto ops = link_operations(2, {});
  REQUIRE(ops.size() == 2);
  CHECK(ops[0].gate.kind() == sim::GateKind::CP);
  CHECK(ops[0].qubits == std::vector<int>{0, 2});
  CHECK(ops[1].qubits == std::vector<int>{1, 3});
  CHECK(ops[0].gate.angle() == doctest::Approx(pi / 2));

  auto chain = build({{pi / 16, pi / 16}, {pi / 32, pi / 32}});
  const auto& psi = chain.register_state()->amplitudes();
  REQUIRE(psi.size() == 16);
  CHECK(max_dev(psi, oracle::chain_state({{pi / 16, pi / 16}, {pi / 32, pi / 32}}, pi / 2)) < 1e-12);
  for (Eigen::Index i = 0; i < 16; ++i) {
    if (!in_bell_support(i, 2)) CHECK(std::abs(psi(i)) == 0.0);
  }
}

TEST_CASE("third block links with a decomposed CCP per class") {
  const auto ops = link_operations(3, {});
  for (const auto& op : ops) CHECK(op.gate.arity() <= 2);

  ChainOptions direct;
  direct.decompose_ccp = false;
  const auto direct_ops = link_operations(3, direct);
  REQUIRE(direct_ops.size() == 2);
  CHECK(direct_ops[0].gate.kind() == sim::GateKind::MCP);
  CHECK(direct_ops[0].qubits == std::vector<int>{0, 2, 4});

  const std::vector<std::pair<double, double>> phases{{pi / 8, pi / 16}, {pi / 16, pi / 32}, {pi / 32, pi / 64}};
  const auto expected = oracle::chain_state(phases, pi / 2);
  CHECK(max_dev(build(phases).register_state()->amplitudes(), expected) < 1e-12);
  CHECK(max_dev(build(phases, direct).register_state()->amplitudes(), expected) < 1e-12);
}

TEST_CASE("three-NFT chain matches the golden amplitudes") {
  // The phases sum past pi, so this chain can only be built with the budget off.
  const std::vector<std::pair<double, double>> phases{{pi / 2, pi / 4}, {pi / 4, pi / 16}, {pi / 32, 3 * pi / 16}};
  CHECK_THROWS_AS(build(phases), ConstraintError);
  ChainOptions opts;
  opts.enforce_budget = false;
  auto chain = build(phases, opts);
  const auto& psi = chain.register_state()->amplitudes();
  const auto golden = read_golden("three_nft_chain.txt");
  REQUIRE(golden.size() == 64);
  CHECK(max_dev(psi, golden) < 1e-12);
  CHECK(max_dev(psi, oracle::chain_state(phases, pi / 2)) < 1e-12);
}

TEST_CASE("register stays in the per-block Bell support") {
  Rng rng(7);
  for (int blocks = 1; blocks <= 4; ++blocks) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::pair<double, double>> phases;
      for (int m = 0; m < blocks; ++m) phases.emplace_back(rng.uniform() * pi / 8, rng.uniform() * pi / 8);
      auto chain = build(phases);
      const auto& psi = chain.register_state()->amplitudes();
      for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if (!in_bell_support(i, blocks)) REQUIRE(std::abs(psi(i)) == 0.0);
      }
      CHECK(max_dev(psi, oracle::chain_state(phases, pi / 2)) < 1e-12);
    }
  }
}

TEST_CASE("closed form replays bit-identically") {
  auto chain = build({{pi / 16, pi / 16}, {pi / 32, pi / 32}, {pi / 64, pi / 64}});
  const auto a = closed_form(chain);
  const auto b = closed_form(chain);
  REQUIRE(a.has_value());
  CHECK(a->dump() == b->dump());
  CHECK(a->dump() == chain.register_state()->dump());
  CHECK(sim::fidelity_pure(sim::to_density(*a), *chain.register_state()) >= 1 - 1e-10);
}

TEST_CASE("chain circuit prepares the same register") {
  auto chain = build({{pi / 16, pi / 16}, {pi / 32, pi / 32}, {pi / 64, pi / 64}});
  auto psi = chain_circuit(chain.blocks(), chain.options()).simulate();
  CHECK(max_dev(psi.amplitudes(), chain.register_state()->amplitudes()) < 1e-12);
  CHECK_THROWS_AS(chain_circuit({}, {}), ParameterError);
}

TEST_CASE("tracing out the newest block exposes the link") {
  const std::vector<std::pair<double, double>> phases{{pi / 16, pi / 16}, {pi / 32, pi / 32}};
  const std::vector<int> prior{0, 1};

  ChainOptions unlinked;
  unlinked.link_phase = 0.0;
  auto before = build({phases[0]}, unlinked);
  auto after = build(phases, unlinked);
  const auto rho0 = sim::to_density(*before.register_state());
  const auto reduced0 = sim::to_density(*after.register_state()).partial_trace(prior);
  CHECK(sim::trace_distance(rho0, reduced0) < 1e-10);

  auto linked = build(phases);
  const auto reduced = sim::to_density(*linked.register_state()).partial_trace(prior);
  CHECK(sim::trace_distance(rho0, reduced) > 1e-3);
}

TEST_CASE("append rejects bad blocks without changing the chain") {
  auto chain = build({{pi / 16, pi / 16}});
  const auto snapshot = chain.register_state()->dump();

  CHECK_THROWS_AS(chain.append(block(3, 0.1, 0.1)), OrderingError);
  CHECK_THROWS_AS(chain.append(block(1, 0.1, 0.1)), OrderingError);
  CHECK_THROWS_AS(chain.append(block(2, pi / 2, pi / 2)), ConstraintError);
  CHECK(chain.size() == 1);
  CHECK(chain.register_state()->dump() == snapshot);

  // Exactly pi is rejected, the bound is strict.
  ChainState tight;
  tight.append(block(1, pi / 2, 0));
  CHECK_THROWS_AS(tight.append(block(2, pi / 4, pi / 4)), ConstraintError);

  ChainState full;
  for (int m = 1; m <= kMaxBlocks; ++m) full.append(block(m, 0.01, 0.01));
  CHECK(full.register_state()->num_qubits() == 2 * kMaxBlocks);
  CHECK_THROWS_AS(full.append(block(kMaxBlocks + 1, 0.01, 0.01)), CapacityError);

  ChainOptions bad;
  bad.max_blocks = 9;
  CHECK_THROWS_AS(ChainState({}, bad), CapacityError);

  CHECK_THROWS_AS(chain.append(block(2, 0.1, 0.1), sim::StateVector(3)), ParameterError);
}

TEST_CASE("block records re-derive their phases") {
  codec::PhaseEncoding enc{pi / 8, 2, 3};
  Block b = block(2, 0, 0);
  b.owner = codec::InfoPayload{"101", 2};
  b.theta_a = codec::encode_info(*b.owner, enc);
  codec::Token t;
  t.bits = "011";
  t.theta1 = pi;
  t.peer_index = 5;
  t.theta = codec::token_phase(t.bits, t.theta1, t.peer_index);
  b.token = t;
  b.theta_b = t.theta;
  CHECK_NOTHROW(b.check_records(enc));
  b.theta_b += 1e-6;
  CHECK_THROWS_AS(b.check_records(enc), CodecError);
}

TEST_CASE("chain log round-trips and replays") {
  codec::PhaseEncoding enc{pi / 8, 2, 3};
  ChainLog log(enc, {});
  ChainState chain(enc, {});
  for (int m = 1; m <= 3; ++m) {
    Block b = block(m, 0, 0);
    b.owner = codec::InfoPayload{m == 2 ? "110" : "011", m};
    b.theta_a = codec::encode_info(*b.owner, enc);
    codec::Token t;
    t.bits = "10";
    t.theta1 = pi;
    t.peer_index = 5;
    t.theta = codec::token_phase(t.bits, t.theta1, t.peer_index);
    b.token = t;
    b.theta_b = t.theta;
    chain.append(b);
    const std::vector<VerifierOutcome> outcomes{{"p1", "plus"}, {"p2", "plus"}};
    log.add_block(b, m, outcomes);
    log.add_event({{"type", "reward"}, {"round", m}, {"peer", "p0"}, {"amount", 1.0}});
  }

  const auto text = log.serialize();
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  const auto parsed = ChainLog::parse(text);
  CHECK(parsed.serialize() == text);
  auto replayed = parsed.replay();
  CHECK(replayed.size() == 3);
  CHECK(replayed.register_state()->dump() == chain.register_state()->dump());

  const auto path = std::filesystem::temp_directory_path() / "qnft_test_chain.jsonl";
  log.save(path);
  CHECK(ChainLog::load(path).serialize() == text);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(log.add_event({{"type", "block"}}), ProtocolError);
  CHECK_THROWS_AS(ChainLog::parse(""), ConfigError);
  CHECK_THROWS_AS(ChainLog::parse("{\"type\":\"block\"}\n"), ConfigError);

  // A tampered phase no longer matches the owner bits.
  auto lines = text;
  const auto first_block = lines.find("\"theta_a\":");
  lines.replace(first_block, 10, "\"theta_a\":0.5,\"x\":");
  CHECK_THROWS_AS(ChainLog::parse(lines), ConfigError);

  // Blocks out of order.
  std::istringstream in(text);
  std::string genesis, b1, r1, b2;
  std::getline(in, genesis);
  std::getline(in, b1);
  std::getline(in, r1);
  std::getline(in, b2);
  CHECK_THROWS_AS(ChainLog::parse(genesis + "\n" + b2 + "\n"), ConfigError);
}
