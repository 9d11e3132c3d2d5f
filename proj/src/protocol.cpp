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

#include "qnft/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>

#include <sodium.h>

#include "qnft/errors.hpp"

namespace qnft::protocol {

namespace {

using std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void ensure_sodium() {
  static const int ready = sodium_init();
  if (ready < 0) throw ProtocolError("libsodium failed to initialize");
}

sim::StateVector bell_with_phase(double theta) {
  sim::StateVector s(2);
  sim::bell_pair(s, 0, 1);
  if (theta != 0.0) s.apply(sim::Gate::phase(theta), {0});
  return s;
}

/// Keeps the amplitudes whose `qubit` bit equals `bit`; the state must
/// already be collapsed on that qubit.
sim::StateVector drop_qubit(const sim::StateVector& s, int qubit, int bit) {
  const Eigen::Index half = static_cast<Eigen::Index>(s.dim() / 2);
  Eigen::VectorXcd out(half);
  const Eigen::Index low = (Eigen::Index{1} << qubit) - 1;
  for (Eigen::Index i = 0; i < half; ++i) {
    const Eigen::Index full = ((i & ~low) << 1) | (static_cast<Eigen::Index>(bit) << qubit) | (i & low);
    out(i) = s.amplitudes()(full);
  }
  out.normalize();
  return sim::StateVector::from_amplitudes(std::move(out));
}

std::string outcome_label(sim::BlockOutcome o) { return sim::to_string(o); }

double sin2_half(double delta) {
  const double s = std::sin(delta / 2);
  return s * s;
}

}  // namespace

// ---- classical side -------------------------------------------------------

std::string Disclosure::message() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "qnft-disclosure|%d|%a|%a", m, theta_a, theta_b);
  return buf;
}

Secret secret_from_seed(std::uint64_t seed) {
  Rng rng(seed);
  Secret s{};
  for (std::size_t i = 0; i < s.size(); i += 8) {
    const auto word = rng.next_u64();
    for (std::size_t j = 0; j < 8; ++j) s[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
  }
  return s;
}

Tag sign(const Disclosure& d, const Secret& secret) {
  static_assert(crypto_auth_BYTES == kTagBytes && crypto_auth_KEYBYTES == sizeof(Secret));
  ensure_sodium();
  const auto msg = d.message();
  Tag tag{};
  crypto_auth(tag.data(), reinterpret_cast<const unsigned char*>(msg.data()), msg.size(), secret.data());
  return tag;
}

bool authentic(const Disclosure& d, const Secret& secret) {
  ensure_sodium();
  const auto msg = d.message();
  return crypto_auth_verify(d.tag.data(), reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
                            secret.data()) == 0;
}

// ---- adversaries ----------------------------------------------------------

std::string adversary_name(const Adversary& adversary) {
  return std::visit(overloaded{
                        [](const NoAdversary&) { return std::string("none"); },
                        [](const PhaseOffset&) { return std::string("phase_offset"); },
                        [](const InterceptResend&) { return std::string("intercept_resend"); },
                        [](const EntangleMeasure&) { return std::string("entangle_measure"); },
                        [](const ManInTheMiddle&) { return std::string("mitm"); },
                    },
                    adversary);
}

Eigen::MatrixXcd entangle_unitary(const EntangleMeasure& p) {
  const double n0 = std::norm(p.a) + std::norm(p.c);
  const double n1 = std::norm(p.b) + std::norm(p.d);
  if (std::abs(n0 - 1.0) > 1e-10 || std::abs(n1 - 1.0) > 1e-10) {
    throw ParameterError("entangle-measure amplitudes need |a|^2+|c|^2 = |b|^2+|d|^2 = 1");
  }
  // Local index = block bits (0,1) + 4 * ancilla.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(8, 8);
  u(0, 0) = p.a;
  u(4, 0) = p.c;
  u(3, 3) = p.b;
  u(7, 3) = p.d;
  // Orthonormal completion of the remaining columns from the standard basis.
  std::vector<Eigen::Index> filled{0, 3};
  Eigen::Index candidate = 0;
  for (Eigen::Index col = 0; col < 8; ++col) {
    if (col == 0 || col == 3) continue;
    for (;; ++candidate) {
      if (candidate >= 8) throw ParameterError("entangle-measure unitary completion failed");
      Eigen::VectorXcd v = Eigen::VectorXcd::Unit(8, candidate);
      for (auto f : filled) v -= u.col(f).dot(v) * u.col(f);
      if (v.norm() > 1e-8) {
        u.col(col) = v.normalized();
        filled.push_back(col);
        ++candidate;
        break;
      }
    }
  }
  return u;
}

Channel::Channel(Adversary adversary, Secret secret) : adversary_(std::move(adversary)), secret_(secret) {}

Delivery Channel::transmit(Delivery delivery, const std::string& peer, Rng& rng) {
  const double claimed = delivery.disclosure.theta_a + delivery.disclosure.theta_b;
  std::visit(
      overloaded{
          [](const NoAdversary&) {},
          [&](const PhaseOffset& adv) {
            if (adv.target && *adv.target != peer) return;
            ++intercepted_;
            delivery.state.apply(sim::Gate::phase(adv.delta), {0});
          },
          [&](const InterceptResend& adv) {
            ++intercepted_;
            const std::array<int, 2> both{0, 1};
            delivery.state.measure(both, rng);
            ++measurements_;
            double forged = claimed;
            if (adv.guess == GuessStrategy::Uniform) forged = 2 * pi * rng.uniform();
            if (adv.guess == GuessStrategy::FixedOffset) forged = claimed + adv.offset;
            delivery.state = bell_with_phase(forged);
          },
          [&](const EntangleMeasure& adv) {
            ++intercepted_;
            sim::StateVector joint = delivery.state.tensor(sim::StateVector(1));
            const std::array<int, 3> ops{0, 1, 2};
            joint.apply_matrix(entangle_unitary(adv), ops);
            const int bit = sim::measure_computational(joint, 2, rng);
            ++measurements_;
            delivery.state = drop_qubit(joint, 2, bit);
          },
          [&](const ManInTheMiddle& adv) {
            if (!adv.forge) return;
            ++intercepted_;
            const std::array<int, 2> both{0, 1};
            delivery.state.measure(both, rng);
            ++measurements_;
            const double forged = 2 * pi * rng.uniform();
            delivery.state = bell_with_phase(forged);
            if (!adv.has_secret) {
              // Its own block, signed with the only key it has.
              Disclosure fake{delivery.disclosure.m, forged / 2, forged / 2, {}};
              fake.tag = sign(fake, secret_from_seed(rng.next_u64()));
              delivery.disclosure = fake;
            }
          },
      },
      adversary_);
  return delivery;
}

// ---- verification ---------------------------------------------------------

Verification verify_block(sim::StateVector received, double theta_a, double theta_b, Rng& rng) {
  if (received.num_qubits() != 2) throw ParameterError("block verification needs a 2-qubit state");
  Verification v;
  v.outcome = sim::measure_in_block_basis(received, 0, 1, theta_a + theta_b, rng);
  v.pass = v.outcome == sim::BlockOutcome::Plus;
  v.state = std::move(received);
  return v;
}

double pass_probability(const sim::StateVector& received, double theta_a, double theta_b) {
  return sim::block_basis_probabilities(received, 0, 1, theta_a + theta_b)[0];
}

// ---- peers and rounds -----------------------------------------------------

nlohmann::json RoundReport::to_json() const {
  auto or_null = [](const std::string& s) { return s.empty() ? nlohmann::json(nullptr) : nlohmann::json(s); };
  auto v = nlohmann::json::array();
  for (const auto& pv : verdicts) v.push_back({{"peer", pv.peer}, {"outcome", pv.outcome}, {"pass", pv.pass}});
  return {
      {"round", round},
      {"m", m},
      {"winner", winner},
      {"status", committed ? "committed" : "aborted"},
      {"owner_bits", or_null(owner_bits)},
      {"token_bits", or_null(token_bits)},
      {"theta_a", theta_a},
      {"theta_b", theta_b},
      {"verdicts", std::move(v)},
      {"abort_reason", or_null(abort_reason)},
      {"preparations", preparations},
      {"adversary", adversary},
  };
}

Network::Network(NetworkConfig config, consensus::StakeLedger stakes, std::uint64_t seed)
    : config_(std::move(config)),
      stakes_(std::move(stakes)),
      secret_(secret_from_seed(Rng::derive_seed(seed, 0x5ec7e7))),
      channel_(NoAdversary{}, secret_),
      rng_(seed) {
  config_.encoding.validate();
  if (stakes_.entries().empty()) throw ConsensusError("network needs at least one staked peer");
  if (!(config_.quorum > 0.0 && config_.quorum <= 1.0)) throw ParameterError("quorum must be in (0, 1]");
  if (!(config_.slash_fraction > 0.0 && config_.slash_fraction <= 1.0)) {
    throw ParameterError("slash fraction must be in (0, 1]");
  }
  if (!(config_.reward >= 0.0)) throw ParameterError("reward must be non-negative");
  if (config_.reward >= stakes_.policy().min_stake) {
    throw PolicyError("reward must stay below the minimum stake");
  }
  if (config_.token_qubits < 1 || config_.token_qubits > codec::kMaxTokenQubits) {
    throw CapacityError("token needs 1.." + std::to_string(codec::kMaxTokenQubits) + " qubits");
  }
  for (const auto& e : stakes_.entries()) {
    peers_.push_back({e.peer, ledger::ChainState(config_.encoding, config_.chain),
                      ledger::ChainLog(config_.encoding, config_.chain), true});
  }
}

const Peer& Network::peer(const std::string& id) const {
  auto it = std::find_if(peers_.begin(), peers_.end(), [&](const Peer& p) { return p.id == id; });
  if (it == peers_.end()) throw ProtocolError("unknown peer: " + id);
  return *it;
}

int Network::token_k() const {
  return config_.token_k > 0 ? config_.token_k : static_cast<int>(peers_.size());
}

bool Network::logs_identical() const {
  const auto first = peers_.front().log.serialize();
  return std::all_of(peers_.begin(), peers_.end(), [&](const Peer& p) { return p.log.serialize() == first; });
}

RoundReport Network::mint_round(const std::string& owner_bits) {
  const int m = chain_length() + 1;
  ledger::Block block;
  block.index = m;
  block.owner = codec::InfoPayload{owner_bits, m};
  block.theta_a = codec::encode_info(*block.owner, config_.encoding);
  // The token is drawn only once the round is known to be admissible.
  check_capacity();
  consensus::StakeLedger stakes = stakes_;
  stakes.advance_time(1);
  const std::string winner = stakes.select_validator(rng_);
  block.token = codec::generate_token(config_.token_qubits, config_.token_theta1, token_k(), rng_);
  block.theta_b = block.token->theta;
  peers_.front().chain.check_appendable(block);
  stakes_ = std::move(stakes);
  return settle(block, winner);
}

RoundReport Network::mint_block(const ledger::Block& preset) {
  ledger::Block block = preset;
  block.index = chain_length() + 1;
  block.check_records(config_.encoding);
  check_capacity();
  consensus::StakeLedger stakes = stakes_;
  stakes.advance_time(1);
  const std::string winner = stakes.select_validator(rng_);
  peers_.front().chain.check_appendable(block);
  stakes_ = std::move(stakes);
  return settle(block, winner);
}

void Network::check_capacity() const {
  if (chain_length() >= config_.chain.max_blocks) {
    throw CapacityError("chain is full (" + std::to_string(config_.chain.max_blocks) + " blocks)");
  }
}

RoundReport Network::settle(const ledger::Block& block, const std::string& winner) {
  const int m = block.index;
  RoundReport report;
  report.round = round_++;
  report.m = m;
  report.winner = winner;
  report.owner_bits = block.owner ? block.owner->bits : "";
  report.token_bits = block.token ? block.token->bits : "";
  report.theta_a = block.theta_a;
  report.theta_b = block.theta_b;
  report.adversary = adversary_name(channel_.adversary());

  Disclosure disclosure{m, block.theta_a, block.theta_b, {}};
  disclosure.tag = sign(disclosure, secret_);

  // Minter prepares one copy per peer; its own copy never leaves.
  Rng channel_rng = rng_.derive(1);
  const std::uint64_t verify_base = rng_.next_u64();
  std::vector<Delivery> inbox;
  inbox.reserve(peers_.size());
  for (const auto& p : peers_) {
    Delivery d{ledger::create_block_state(block, config_.chain.enforce_budget), disclosure};
    ++report.preparations;
    inbox.push_back(p.id == winner ? std::move(d) : channel_.transmit(std::move(d), p.id, channel_rng));
  }

  auto check = [&](std::size_t i) {
    Delivery& d = inbox[i];
    std::pair<PeerVerdict, std::optional<Verification>> out;
    out.first.peer = peers_[i].id;
    if (!authentic(d.disclosure, secret_) || d.disclosure.m != m) {
      out.first.outcome = "rejected";
      return out;
    }
    Rng rng(Rng::derive_seed(verify_base, i));
    auto v = verify_block(std::move(d.state), d.disclosure.theta_a, d.disclosure.theta_b, rng);
    out.first.outcome = outcome_label(v.outcome);
    out.first.pass = v.pass;
    out.second = std::move(v);
    return out;
  };

  std::vector<std::pair<PeerVerdict, std::optional<Verification>>> results;
  results.reserve(peers_.size());
  if (config_.parallel_verify) {
    std::vector<std::future<std::pair<PeerVerdict, std::optional<Verification>>>> futures;
    for (std::size_t i = 0; i < peers_.size(); ++i) futures.push_back(std::async(std::launch::async, check, i));
    for (auto& f : futures) results.push_back(f.get());
  } else {
    for (std::size_t i = 0; i < peers_.size(); ++i) results.push_back(check(i));
  }

  // Barrier: every verdict is in before anything changes.
  std::vector<ledger::VerifierOutcome> outcomes;
  std::size_t passes = 0;
  for (const auto& [verdict, v] : results) {
    report.verdicts.push_back(verdict);
    outcomes.push_back({verdict.peer, verdict.outcome});
    if (verdict.pass) ++passes;
  }
  const auto needed = static_cast<std::size_t>(std::ceil(config_.quorum * static_cast<double>(peers_.size()) - 1e-9));
  report.committed = passes >= needed;

  if (report.committed) {
    for (std::size_t i = 0; i < peers_.size(); ++i) {
      auto& v = results[i].second;
      if (v && v->pass) {
        peers_[i].chain.append(block, std::move(v->state));
      } else {
        // Outvoted peer fetches a fresh copy from the minter.
        ++report.preparations;
        peers_[i].chain.append(block);
      }
      peers_[i].log.add_block(block, report.round, outcomes);
    }
    stakes_.reward(winner, config_.reward);
    stakes_.record_win(winner);
    for (auto& p : peers_) {
      p.log.add_event({{"type", "reward"}, {"round", report.round}, {"peer", winner}, {"amount", config_.reward}});
    }
  } else {
    report.abort_reason = std::to_string(peers_.size() - passes) + " of " + std::to_string(peers_.size()) +
                          " peers failed verification";
    stakes_.slash(winner, config_.slash_fraction);
    nlohmann::json abort = {{"type", "abort"}, {"round", report.round}, {"m", m}, {"winner", winner},
                            {"reason", report.abort_reason}, {"verifiers", nlohmann::json::array()}};
    for (const auto& o : outcomes) abort["verifiers"].push_back({{"peer", o.peer}, {"outcome", o.outcome}});
    for (auto& p : peers_) {
      if (p.id == winner) p.trusted = false;
      p.log.add_event(abort);
      p.log.add_event({{"type", "slash"}, {"round", report.round}, {"peer", winner},
                       {"fraction", config_.slash_fraction}});
    }
  }
  return report;
}

// ---- swap test ------------------------------------------------------------

bool SwapTestResult::within(double k) const {
  if (sigma == 0.0) return std::abs(sampled - analytic) < 1e-12;
  return std::abs(sampled - analytic) <= k * sigma;
}

nlohmann::json SwapTestResult::to_json() const {
  return {{"p0_analytic", analytic}, {"p0_sampled", sampled}, {"shots", shots}, {"sigma", sigma}};
}

SwapTestResult swap_test(const sim::StateVector& joint, std::span<const int> left, std::span<const int> right,
                         std::size_t shots, Rng& rng) {
  if (left.size() != right.size() || left.empty()) throw ProtocolError("swap test needs equal, non-empty halves");
  if (shots == 0) throw ParameterError("swap test needs at least one shot");
  sim::StateVector reg = joint.tensor(sim::StateVector(1));
  const int test = joint.num_qubits();
  reg.apply(sim::Gate::h(), {test});
  for (std::size_t i = 0; i < left.size(); ++i) reg.apply(sim::Gate::cswap(), {test, left[i], right[i]});
  reg.apply(sim::Gate::h(), {test});

  const std::array<int, 1> t{test};
  SwapTestResult r;
  r.analytic = std::clamp(reg.marginal_probabilities(t)[0], 0.0, 1.0);
  r.shots = shots;
  r.sampled = static_cast<double>(reg.sample(t, shots, rng)[0]) / static_cast<double>(shots);
  r.sigma = std::sqrt(r.analytic * (1 - r.analytic) / static_cast<double>(shots));
  return r;
}

SwapTestResult compare_chains_swap_test(const sim::StateVector& chain_m, const sim::StateVector& chain_n,
                                        std::size_t shots, Rng& rng) {
  const int w = chain_m.num_qubits();
  if (w != chain_n.num_qubits()) {
    throw ProtocolError("swap test registers differ in width: " + std::to_string(w) + " vs " +
                        std::to_string(chain_n.num_qubits()));
  }
  if (w > 6) throw ProtocolError("swap test limited to 6-qubit registers");
  std::vector<int> left(static_cast<std::size_t>(w));
  std::vector<int> right(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) {
    left[static_cast<std::size_t>(i)] = i;
    right[static_cast<std::size_t>(i)] = w + i;
  }
  return swap_test(chain_m.tensor(chain_n), left, right, shots, rng);
}

// ---- attack harness -------------------------------------------------------

double DetectionStats::sigma() const {
  return trials ? std::sqrt(expected * (1 - expected) / static_cast<double>(trials)) : 0.0;
}

bool DetectionStats::within(double k) const {
  const double s = sigma();
  if (s == 0.0) return std::abs(frequency() - expected) < 1e-12;
  return std::abs(frequency() - expected) <= k * s;
}

nlohmann::json DetectionStats::to_json() const {
  return {{"attack", attack},       {"trials", trials},   {"detected", detected},
          {"frequency", frequency()}, {"expected", expected}, {"sigma", sigma()},
          {"adversary_measurements", adversary_measurements}};
}

namespace {

/// Minter -> channel -> one peer, `rounds` times with random honest phases.
DetectionStats single_peer_rounds(std::size_t rounds, Adversary adversary, double expected, Rng& rng) {
  if (rounds == 0) throw ParameterError("attack needs at least one round");
  const Secret secret = secret_from_seed(rng.next_u64());
  Channel channel(adversary, secret);
  DetectionStats stats;
  stats.attack = adversary_name(adversary);
  stats.expected = expected;
  for (std::size_t r = 0; r < rounds; ++r) {
    Disclosure d{1, rng.uniform() * pi / 4, rng.uniform() * pi / 4, {}};
    d.tag = sign(d, secret);
    Delivery in = channel.transmit({bell_with_phase(d.theta_a + d.theta_b), d}, "peer", rng);
    bool pass = false;
    if (authentic(in.disclosure, secret)) pass = verify_block(std::move(in.state), in.disclosure.theta_a,
                                                               in.disclosure.theta_b, rng).pass;
    ++stats.trials;
    if (!pass) ++stats.detected;
  }
  stats.adversary_measurements = channel.adversary_measurements();
  return stats;
}

}  // namespace

DetectionStats attack_intercept_resend(std::size_t rounds, const InterceptResend& strategy, Rng& rng) {
  double expected = 0.5;  // (1/2pi) * integral of sin^2(delta/2)
  if (strategy.guess == GuessStrategy::FixedOffset) expected = sin2_half(strategy.offset);
  if (strategy.guess == GuessStrategy::Exact) expected = 0.0;
  return single_peer_rounds(rounds, strategy, expected, rng);
}

DetectionStats attack_mitm(std::size_t rounds, const ManInTheMiddle& adversary, Rng& rng) {
  double expected = 0.0;
  if (adversary.forge) expected = adversary.has_secret ? 0.5 : 1.0;
  return single_peer_rounds(rounds, adversary, expected, rng);
}

DetectionStats phase_offset_detection(std::size_t rounds, double delta, Rng& rng) {
  return single_peer_rounds(rounds, PhaseOffset{delta, std::nullopt}, sin2_half(delta), rng);
}

nlohmann::json LeakReport::to_json() const {
  auto cplx = [](Complex z) { return nlohmann::json::array({z.real(), z.imag()}); };
  auto rows = nlohmann::json::array();
  for (const auto& r : readings) {
    rows.push_back({{"theta", r.theta},
                    {"z", r.z},
                    {"x", r.x},
                    {"z_sampled", r.z_sampled},
                    {"x_sampled", r.x_sampled},
                    {"swap_p0", r.swap_p0}});
  }
  return {{"a", cplx(params.a)},
          {"b", cplx(params.b)},
          {"c", cplx(params.c)},
          {"d", cplx(params.d)},
          {"shots", shots},
          {"readings", std::move(rows)},
          {"max_tv_analytic", max_tv_analytic},
          {"max_tv_sampled", max_tv_sampled},
          {"max_marginal_deviation", max_marginal_deviation}};
}

LeakReport attack_entangle_measure(const EntangleMeasure& params, std::span<const double> thetas,
                                   std::size_t shots, Rng& rng) {
  const Eigen::MatrixXcd u = entangle_unitary(params);
  if (thetas.empty()) throw ParameterError("entangle-measure attack needs at least one phase");
  if (shots == 0) throw ParameterError("entangle-measure attack needs at least one shot");
  LeakReport report;
  report.params = params;
  report.shots = shots;
  const std::array<int, 3> ops{0, 1, 2};
  const std::array<int, 1> anc{2};
  const std::array<int, 2> attacked_block{0, 1};
  const std::array<int, 2> honest_block{3, 4};

  for (double theta : thetas) {
    AncillaReading r;
    r.theta = theta;
    sim::StateVector joint = bell_with_phase(theta).tensor(sim::StateVector(1));
    joint.apply_matrix(u, ops);

    const auto& psi = joint.amplitudes();
    r.rho = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int blk = 0; blk < 4; ++blk) r.rho(i, j) += psi(blk + 4 * i) * std::conj(psi(blk + 4 * j));
      }
    }
    r.z = {r.rho(0, 0).real(), r.rho(1, 1).real()};
    r.x = {0.5 + r.rho(0, 1).real(), 0.5 - r.rho(0, 1).real()};

    auto frequencies = [&](const sim::StateVector& s) {
      const double zeros = static_cast<double>(s.sample(anc, shots, rng)[0]);
      return std::array<double, 2>{zeros / static_cast<double>(shots), 1 - zeros / static_cast<double>(shots)};
    };
    r.z_sampled = frequencies(joint);
    sim::StateVector xbasis = joint;
    xbasis.apply(sim::Gate::h(), {2});
    r.x_sampled = frequencies(xbasis);

    // Attacked copy (with its ancilla still attached) against an honest one.
    const auto pair = joint.tensor(bell_with_phase(theta));
    r.swap_p0 = swap_test(pair, attacked_block, honest_block, 1, rng).analytic;
    report.readings.push_back(std::move(r));
  }

  auto tv = [](const std::array<double, 2>& p, const std::array<double, 2>& q) {
    return 0.5 * (std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]));
  };
  for (std::size_t i = 0; i < report.readings.size(); ++i) {
    for (std::size_t j = i + 1; j < report.readings.size(); ++j) {
      const auto& p = report.readings[i];
      const auto& q = report.readings[j];
      report.max_tv_analytic = std::max({report.max_tv_analytic, tv(p.z, q.z), tv(p.x, q.x)});
      report.max_tv_sampled = std::max({report.max_tv_sampled, tv(p.z_sampled, q.z_sampled),
                                        tv(p.x_sampled, q.x_sampled)});
      report.max_marginal_deviation =
          std::max(report.max_marginal_deviation, (p.rho - q.rho).cwiseAbs().maxCoeff());
    }
  }
  return report;
}

EntangleMeasure random_entangle_params(Rng& rng) {
  auto unit_pair = [&](Complex& first, Complex& second) {
    const double alpha = rng.uniform() * pi / 2;
    first = std::polar(std::cos(alpha), 2 * pi * rng.uniform());
    second = std::polar(std::sin(alpha), 2 * pi * rng.uniform());
  };
  EntangleMeasure p;
  unit_pair(p.a, p.c);
  unit_pair(p.b, p.d);
  return p;
}

}  // namespace qnft::protocol
