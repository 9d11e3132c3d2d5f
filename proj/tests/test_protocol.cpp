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

#include <cmath>
#include <numbers>

#include "oracle/dense.hpp"
#include "qnft/errors.hpp"
#include "qnft/protocol.hpp"
#include "qnft/sim/density_matrix.hpp"
#include "support.hpp"

using namespace qnft;
using namespace qnft::protocol;
using std::numbers::pi;

namespace {

consensus::StakeLedger five_peers() {
  consensus::StakeLedger stakes;
  const double coins[] = {5, 3, 8, 2, 6};
  for (int i = 0; i < 5; ++i) stakes.add_peer("peer" + std::to_string(i), coins[i]);
  return stakes;
}

sim::StateVector bell(double theta) {
  sim::StateVector s(2);
  sim::bell_pair(s, 0, 1);
  s.apply(sim::Gate::phase(theta), {0});
  return s;
}

}  // namespace

TEST_CASE("disclosure tags") {
  const auto secret = secret_from_seed(1);
  Disclosure d{2, 0.25, 0.125, {}};
  d.tag = sign(d, secret);
  CHECK(authentic(d, secret));
  CHECK_FALSE(authentic(d, secret_from_seed(2)));
  auto altered = d;
  altered.theta_b += 1e-12;
  CHECK_FALSE(authentic(altered, secret));
  CHECK(secret_from_seed(1) == secret);
}

TEST_CASE("honest block always passes") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform() * pi / 4;
    const double b = rng.uniform() * pi / 4;
    auto v = verify_block(bell(a + b), a, b, rng);
    CHECK(v.pass);
    CHECK(v.outcome == sim::BlockOutcome::Plus);
  }
}

TEST_CASE("leaked basis state always fails") {
  Rng rng(4);
  sim::StateVector s(2);
  s.apply(sim::Gate::x(), {1});  // |01> in (bit of B, bit of A) reading order
  for (int i = 0; i < 100; ++i) {
    auto v = verify_block(s, 0.1, 0.2, rng);
    CHECK_FALSE(v.pass);
    CHECK((v.outcome == sim::BlockOutcome::Leak01 || v.outcome == sim::BlockOutcome::Leak10));
  }
  CHECK(pass_probability(s, 0.1, 0.2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(verify_block(sim::StateVector(3), 0, 0, rng), ParameterError);
}

TEST_CASE("pass probability follows cos^2(delta/2)") {
  Rng rng(5);
  for (double delta : {0.0, pi / 8, pi / 4, pi / 2, pi}) {
    // Analytic against the overlap with the claimed basis vector.
    const double theta = 0.3;
    const auto sent = bell(theta + delta);
    const auto claimed = bell(theta);
    const double overlap = std::norm(sim::inner_product(claimed, sent));
    CHECK(pass_probability(sent, 0.1, 0.2) == doctest::Approx(overlap).epsilon(1e-12));
    CHECK(overlap == doctest::Approx(std::pow(std::cos(delta / 2), 2)).epsilon(1e-12));

    const auto stats = phase_offset_detection(10000, delta, rng);
    CHECK(stats.trials == 10000);
    CHECK(stats.within());
  }
}

TEST_CASE("honest rounds commit and keep logs identical") {
  NetworkConfig cfg;
  Network net(cfg, five_peers(), 42);
  CHECK(net.token_k() == 5);
  const char* owners[] = {"110", "011", "101", "000", "111", "100"};
  for (int r = 0; r < 6; ++r) {
    const auto report = net.mint_round(owners[r]);
    CHECK(report.committed);
    CHECK(report.m == r + 1);
    CHECK(report.preparations == 5);
    for (const auto& v : report.verdicts) CHECK(v.outcome == "plus");
    CHECK(net.logs_identical());
  }
  CHECK(net.chain_length() == 6);
  CHECK_THROWS_AS(net.mint_round("110"), CapacityError);

  // Every peer's register matches the replay of its records.
  for (const auto& p : net.peers()) {
    const auto replay = ledger::closed_form(p.chain);
    CHECK(std::norm(sim::inner_product(*replay, *p.chain.register_state())) >= 1 - 1e-10);
    CHECK(p.trusted);
  }
  const auto replayed = ledger::ChainLog::parse(net.peers()[2].log.serialize()).replay();
  CHECK(replayed.blocks().size() == 6);
}

TEST_CASE("rounds are reproducible and parallel verification agrees") {
  NetworkConfig cfg;
  cfg.parallel_verify = false;
  Network a(cfg, five_peers(), 7);
  cfg.parallel_verify = true;
  Network b(cfg, five_peers(), 7);
  a.channel().set_adversary(PhaseOffset{pi / 2, std::nullopt});
  b.channel().set_adversary(PhaseOffset{pi / 2, std::nullopt});
  for (int r = 0; r < 4; ++r) {
    CHECK(a.mint_round("101").to_json() == b.mint_round("101").to_json());
  }
  CHECK(a.peers()[0].log.serialize() == b.peers()[0].log.serialize());
  CHECK(a.stakes().to_json() == b.stakes().to_json());
}

TEST_CASE("a pi phase flip aborts the round and slashes the validator") {
  Network net({}, five_peers(), 9);
  net.mint_round("110");
  net.channel().set_adversary(PhaseOffset{pi, std::nullopt});
  const auto before = net.stakes().to_json();
  const auto report = net.mint_round("011");
  CHECK_FALSE(report.committed);
  CHECK(report.adversary == "phase_offset");
  int failed = 0;
  for (const auto& v : report.verdicts) failed += v.pass ? 0 : 1;
  CHECK(failed == 4);  // everyone except the minter's own copy
  CHECK(net.chain_length() == 1);
  CHECK_FALSE(net.peer(report.winner).trusted);
  const auto& slashed = net.stakes().entry(report.winner);
  CHECK(slashed.holding_time == 0);
  for (const auto& e : before) {
    if (e["id"] == report.winner) CHECK(slashed.coins == doctest::Approx(e["coins"].get<double>() * 0.5));
  }
  CHECK(net.logs_identical());
  const auto last = net.peers()[0].log.records().back();
  CHECK(last["type"] == "slash");

  // The chain keeps growing after an abort.
  net.channel().set_adversary(NoAdversary{});
  CHECK(net.mint_round("011").committed);
  CHECK(net.chain_length() == 2);
}

TEST_CASE("a pi/2 offset on one peer aborts about half the rounds") {
  Rng seeds(10);
  std::size_t aborts = 0;
  const std::size_t rounds = 10000;
  auto stakes = five_peers();
  for (std::size_t r = 0; r < rounds; ++r) {
    // peer1 is never the minter, so its copy always crosses the channel.
    consensus::StakeLedger st;
    for (const auto& e : stakes.entries()) st.add_peer(e.peer, e.peer == "peer1" ? 0.0 : e.coins);
    Network net({}, st, seeds.next_u64());
    net.channel().set_adversary(PhaseOffset{pi / 2, std::string("peer1")});
    if (!net.mint_round("101").committed) ++aborts;
  }
  CHECK(testing::within_sigma(aborts, rounds, 0.5));
}

TEST_CASE("quorum lets an outvoted peer catch up") {
  NetworkConfig cfg;
  cfg.quorum = 0.6;
  consensus::StakeLedger st;
  st.add_peer("m", 5.0);
  st.add_peer("x", 0.0);
  st.add_peer("y", 0.0);
  Network net(cfg, st, 1);
  net.channel().set_adversary(PhaseOffset{pi, std::string("x")});
  const auto report = net.mint_round("110");
  CHECK(report.committed);
  CHECK(report.preparations == 4);
  CHECK(net.logs_identical());
  CHECK(net.peer("x").chain.size() == 1);
}

TEST_CASE("network preconditions") {
  consensus::StakeLedger idle;
  idle.add_peer("a", 0.0);
  Network net({}, idle, 1);
  CHECK_THROWS_AS(net.mint_round("110"), ConsensusError);
  CHECK(net.stakes().entry("a").holding_time == 0);
  CHECK_THROWS_AS(Network({}, consensus::StakeLedger{}, 1), ConsensusError);

  NetworkConfig greedy;
  greedy.reward = 50;
  CHECK_THROWS_AS(Network(greedy, five_peers(), 1), PolicyError);

  // A block that would break the phase budget is refused before staking moves.
  NetworkConfig wide;
  wide.encoding = {3.0, 1, 3};
  Network tight(wide, five_peers(), 1);
  const auto before = tight.stakes().to_json();
  CHECK_THROWS_AS(tight.mint_round("111"), ConstraintError);
  CHECK(tight.stakes().to_json() == before);
  CHECK_THROWS_AS(tight.mint_round("11"), CodecError);
}

TEST_CASE("swap test") {
  Rng rng(11);
  auto chain = ledger::closed_form(std::vector<ledger::Block>{{1, pi / 16, pi / 16, {}, {}}}, {});
  auto same = compare_chains_swap_test(*chain, *chain, 10000, rng);
  CHECK(same.analytic == doctest::Approx(1.0));
  CHECK(same.within());

  sim::StateVector zero(1);
  sim::StateVector one(1);
  one.apply(sim::Gate::x(), {0});
  auto orth = compare_chains_swap_test(zero, one, 10000, rng);
  CHECK(orth.analytic == doctest::Approx(0.5));
  CHECK(orth.within());

  // Pi flip on one block of a two-block chain.
  std::vector<ledger::Block> honest{{1, pi / 16, pi / 16, {}, {}}, {2, pi / 32, pi / 32, {}, {}}};
  auto tampered = honest;
  tampered[1].theta_a += pi;
  ledger::ChainOptions loose;
  loose.enforce_budget = false;
  const auto h = *ledger::closed_form(honest, loose);
  const auto t = *ledger::closed_form(tampered, loose);
  const double expected = (1 + std::norm(sim::inner_product(h, t))) / 2;
  auto flip = compare_chains_swap_test(h, t, 10000, rng);
  CHECK(flip.analytic == doctest::Approx(expected).epsilon(1e-12));
  CHECK(flip.within());

  CHECK_THROWS_AS(compare_chains_swap_test(h, zero, 10, rng), ProtocolError);
  sim::StateVector wide(7);
  CHECK_THROWS_AS(compare_chains_swap_test(wide, wide, 10, rng), ProtocolError);
}

TEST_CASE("swap test matches the overlap for random chain pairs") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const int blocks = 1 + trial % 3;
    std::vector<std::pair<double, double>> p1;
    std::vector<std::pair<double, double>> p2;
    for (int m = 0; m < blocks; ++m) {
      p1.emplace_back(rng.uniform() * pi / 8, rng.uniform() * pi / 8);
      p2.emplace_back(rng.uniform() * pi / 8, rng.uniform() * pi / 8);
    }
    const auto a = sim::StateVector::from_amplitudes(oracle::chain_state(p1, pi / 2));
    const auto b = sim::StateVector::from_amplitudes(oracle::chain_state(p2, pi / 2));
    const double overlap = std::norm(oracle::chain_state(p1, pi / 2).dot(oracle::chain_state(p2, pi / 2)));
    auto r = compare_chains_swap_test(a, b, 10000, rng);
    CHECK(r.analytic == doctest::Approx((1 + overlap) / 2).epsilon(1e-12));
    CHECK(r.within());
  }
}

TEST_CASE("intercept and resend") {
  Rng rng(13);
  auto lucky = attack_intercept_resend(2000, {GuessStrategy::Exact, 0.0}, rng);
  CHECK(lucky.detected == 0);
  auto uniform = attack_intercept_resend(10000, {GuessStrategy::Uniform, 0.0}, rng);
  CHECK(uniform.expected == 0.5);
  CHECK(uniform.within());
  auto flip = attack_intercept_resend(2000, {GuessStrategy::FixedOffset, pi}, rng);
  CHECK(flip.frequency() == 1.0);
  auto quarter = attack_intercept_resend(10000, {GuessStrategy::FixedOffset, pi / 2}, rng);
  CHECK(quarter.within());
  CHECK(quarter.adversary_measurements == 10000);
}

TEST_CASE("man in the middle") {
  Rng rng(14);
  auto outsider = attack_mitm(2000, {false, true}, rng);
  CHECK(outsider.frequency() == 1.0);
  CHECK(outsider.expected == 1.0);
  auto insider = attack_mitm(10000, {true, true}, rng);
  CHECK(insider.within());
  auto passive = attack_mitm(2000, {false, false}, rng);
  CHECK(passive.detected == 0);
  CHECK(passive.adversary_measurements == 0);

  // Inside a network the outsider's forged disclosure is rejected outright.
  Network net({}, five_peers(), 5);
  net.channel().set_adversary(ManInTheMiddle{false, true});
  const auto report = net.mint_round("110");
  CHECK_FALSE(report.committed);
  int rejected = 0;
  for (const auto& v : report.verdicts) rejected += v.outcome == "rejected";
  CHECK(rejected == 4);
}

TEST_CASE("entangle-measure unitary") {
  Rng rng(15);
  for (int i = 0; i < 5; ++i) {
    const auto u = entangle_unitary(random_entangle_params(rng));
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(entangle_unitary({1.0, 1.0, 0.5, 0.0}), ParameterError);
}

TEST_CASE("entangle-measure leaks nothing about the phase") {
  Rng rng(16);
  const std::vector<double> thetas{pi / 16, pi / 4, 3 * pi / 4};

  // a = b = 1: the ancilla is never touched.
  auto idle = attack_entangle_measure({1.0, 1.0, 0.0, 0.0}, thetas, 10000, rng);
  for (const auto& r : idle.readings) {
    CHECK(r.z[0] == doctest::Approx(1.0));
    CHECK(r.z_sampled[0] == 1.0);
    CHECK(r.swap_p0 == doctest::Approx(1.0));
  }
  CHECK(idle.max_tv_analytic < 1e-12);

  // a = d = 1 flips the ancilla on the |11> branch: still no phase dependence.
  auto split = attack_entangle_measure({1.0, 0.0, 0.0, 1.0}, thetas, 10000, rng);
  CHECK(split.readings[0].z[0] == doctest::Approx(0.5));
  CHECK(split.max_marginal_deviation < 1e-12);

  for (int i = 0; i < 5; ++i) {
    const auto params = random_entangle_params(rng);
    auto report = attack_entangle_measure(params, thetas, 10000, rng);
    CHECK(report.max_marginal_deviation < 1e-12);
    CHECK(report.max_tv_analytic < 1e-12);
    // Two binomial frequencies at 10^4 shots: 3 sigma of their difference.
    CHECK(report.max_tv_sampled < 3 * std::sqrt(2 * 0.25 / 10000.0));
    const double fid = (1 + std::real(params.a * std::conj(params.b) + params.c * std::conj(params.d))) / 2;
    for (const auto& r : report.readings) {
      CHECK(r.swap_p0 == doctest::Approx((1 + fid) / 2).epsilon(1e-10));
      CHECK(r.swap_p0 < 1.0);
    }
  }
}

TEST_CASE("entangle-measure in a round") {
  // A non-trivial coupling costs the attacker detections.
  Network net({}, five_peers(), 17);
  net.channel().set_adversary(EntangleMeasure{1.0, 0.0, 0.0, 1.0});
  std::size_t aborted = 0;
  for (int r = 0; r < 6 && net.chain_length() < 6; ++r) aborted += net.mint_round("110").committed ? 0 : 1;
  CHECK(aborted > 0);
  CHECK(net.channel().adversary_measurements() > 0);
  CHECK(net.logs_identical());
}
