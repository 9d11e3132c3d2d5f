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

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qnft/chain_log.hpp"
#include "qnft/codec.hpp"
#include "qnft/consensus.hpp"
#include "qnft/ledger.hpp"
#include "qnft/rng.hpp"
#include "qnft/sim/state_vector.hpp"

namespace qnft::protocol {

using Complex = std::complex<double>;

// ---- classical side -------------------------------------------------------

inline constexpr std::size_t kTagBytes = 32;
using Tag = std::array<std::uint8_t, kTagBytes>;
using Secret = std::array<std::uint8_t, 32>;

/// Phase disclosure sent alongside each block copy. The tag stands in for
/// the authenticated channel: HMAC over the fields under the genesis secret.
struct Disclosure {
  int m = 1;
  double theta_a = 0.0;
  double theta_b = 0.0;
  Tag tag{};

  std::string message() const;
};

Secret secret_from_seed(std::uint64_t seed);
Tag sign(const Disclosure& d, const Secret& secret);
bool authentic(const Disclosure& d, const Secret& secret);

/// What travels from the minter to one peer. Move-only in spirit: the
/// channel consumes and returns it.
struct Delivery {
  sim::StateVector state;
  Disclosure disclosure;
};

// ---- adversaries ----------------------------------------------------------

struct NoAdversary {};

/// Adds `delta` to the relative phase of copies headed for `target` (all
/// peers when unset).
struct PhaseOffset {
  double delta = 0.0;
  std::optional<std::string> target;
};

enum class GuessStrategy { Uniform, FixedOffset, Exact };

/// Measures nothing useful; replaces each copy with a Bell pair carrying a
/// guessed phase.
struct InterceptResend {
  GuessStrategy guess = GuessStrategy::Uniform;
  double offset = 0.0;  // FixedOffset only
};

/// Ancilla coupling U_E on ancilla (x) block:
///   |0>|00> -> a|0>|00> + c|1>|00>,   |0>|11> -> b|0>|11> + d|1>|11>.
struct EntangleMeasure {
  Complex a{1.0, 0.0};
  Complex b{1.0, 0.0};
  Complex c{0.0, 0.0};
  Complex d{0.0, 0.0};
};

/// Relay between minter and peers. Without the genesis secret it can only
/// substitute its own block and disclosure. With it, `forge` swaps the
/// quantum copy for a uniformly guessed phase while relaying the authentic
/// disclosure.
struct ManInTheMiddle {
  bool has_secret = false;
  bool forge = true;
};

using Adversary = std::variant<NoAdversary, PhaseOffset, InterceptResend, EntangleMeasure, ManInTheMiddle>;

std::string adversary_name(const Adversary& adversary);

/// 8x8 unitary on (block qubits 0,1; ancilla qubit 2) extending the
/// EntangleMeasure action. ParameterError when the columns are not unit
/// vectors.
Eigen::MatrixXcd entangle_unitary(const EntangleMeasure& params);

class Channel {
 public:
  explicit Channel(Adversary adversary = NoAdversary{}, Secret secret = {});

  const Adversary& adversary() const noexcept { return adversary_; }
  void set_adversary(Adversary adversary) { adversary_ = std::move(adversary); }

  /// Carries `delivery` to `peer`, letting the adversary act on it.
  Delivery transmit(Delivery delivery, const std::string& peer, Rng& rng);

  std::uint64_t intercepted() const noexcept { return intercepted_; }
  /// Measurements the adversary made on intercepted copies.
  std::uint64_t adversary_measurements() const noexcept { return measurements_; }

 private:
  Adversary adversary_;
  Secret secret_;
  std::uint64_t intercepted_ = 0;
  std::uint64_t measurements_ = 0;
};

// ---- verification ---------------------------------------------------------

struct Verification {
  sim::BlockOutcome outcome = sim::BlockOutcome::Plus;
  bool pass = false;
  /// Post-measurement 2-qubit state; the peer appends it on commit.
  sim::StateVector state{2};
};

/// Measures `received` in the block basis of theta_a + theta_b; pass iff plus.
/// ParameterError unless `received` is a 2-qubit state.
Verification verify_block(sim::StateVector received, double theta_a, double theta_b, Rng& rng);

/// Analytic pass probability of `received` against the claimed phases.
double pass_probability(const sim::StateVector& received, double theta_a, double theta_b);

// ---- peers and rounds -----------------------------------------------------

struct Peer {
  std::string id;
  ledger::ChainState chain;
  ledger::ChainLog log;
  bool trusted = true;
};

struct NetworkConfig {
  codec::PhaseEncoding encoding{0.39269908169872414, 2, 3};  // theta1 = pi/8
  ledger::ChainOptions chain;
  int token_qubits = 20;
  double token_theta1 = 3.141592653589793;
  /// Token divisor exponent k; 0 means "number of peers".
  int token_k = 0;
  double reward = 1.0;
  double slash_fraction = 0.5;
  /// Fraction of peers that must pass (1.0 = unanimous).
  double quorum = 1.0;
  bool parallel_verify = false;
};

struct PeerVerdict {
  std::string peer;
  std::string outcome;  // plus | minus | leak01 | leak10 | rejected
  bool pass = false;
};

struct RoundReport {
  int round = 0;
  int m = 0;
  std::string winner;
  bool committed = false;
  std::string owner_bits;
  std::string token_bits;
  double theta_a = 0.0;
  double theta_b = 0.0;
  std::vector<PeerVerdict> verdicts;
  std::string abort_reason;
  int preparations = 0;
  std::string adversary;

  nlohmann::json to_json() const;
};

/// Peers, their stakes, and the channel between the minter and everyone
/// else. Each round: stake, select, mint, verify, settle.
class Network {
 public:
  Network(NetworkConfig config, consensus::StakeLedger stakes, std::uint64_t seed);

  const NetworkConfig& config() const noexcept { return config_; }
  const std::vector<Peer>& peers() const noexcept { return peers_; }
  const Peer& peer(const std::string& id) const;
  const consensus::StakeLedger& stakes() const noexcept { return stakes_; }
  consensus::StakeLedger& stakes() noexcept { return stakes_; }
  Channel& channel() noexcept { return channel_; }
  const Secret& secret() const noexcept { return secret_; }
  int rounds_run() const noexcept { return round_; }
  int chain_length() const { return peers_.front().chain.size(); }
  int token_k() const;

  /// One round. Abort is reported, not thrown. ConsensusError when nobody
  /// holds stake; CapacityError / ConstraintError when the chain cannot
  /// take another block.
  RoundReport mint_round(const std::string& owner_bits);

  /// Same flow for a block whose phases are fixed in advance (its index is
  /// assigned here). Owner/token records, when present, must match.
  RoundReport mint_block(const ledger::Block& block);

  /// True when every peer's serialized chain log is identical.
  bool logs_identical() const;

 private:
  void check_capacity() const;
  RoundReport settle(const ledger::Block& block, const std::string& winner);

  NetworkConfig config_;
  consensus::StakeLedger stakes_;
  std::vector<Peer> peers_;
  Secret secret_;
  Channel channel_;
  Rng rng_;
  int round_ = 0;
};

// ---- swap test ------------------------------------------------------------

struct SwapTestResult {
  double analytic = 0.0;  // P(ancilla = 0)
  double sampled = 0.0;
  std::size_t shots = 0;
  double sigma = 0.0;

  bool within(double k = 3.0) const;
  nlohmann::json to_json() const;
};

/// Controlled-swap test between `left` and `right` qubit lists of `joint`
/// (same length, disjoint). A test qubit is added above the register.
SwapTestResult swap_test(const sim::StateVector& joint, std::span<const int> left,
                         std::span<const int> right, std::size_t shots, Rng& rng);

/// Swap test between two whole registers. ProtocolError on width mismatch or
/// registers wider than 6 qubits.
SwapTestResult compare_chains_swap_test(const sim::StateVector& chain_m, const sim::StateVector& chain_n,
                                        std::size_t shots, Rng& rng);

// ---- attack harness -------------------------------------------------------

struct DetectionStats {
  std::string attack;
  std::size_t trials = 0;
  std::size_t detected = 0;
  double expected = 0.0;  // closed-form detection probability
  std::uint64_t adversary_measurements = 0;

  double frequency() const { return trials ? static_cast<double>(detected) / static_cast<double>(trials) : 0.0; }
  double sigma() const;
  bool within(double k = 3.0) const;
  nlohmann::json to_json() const;
};

/// Single-peer rounds with a fresh random block each time; the copy is
/// intercepted and replaced per `strategy`.
DetectionStats attack_intercept_resend(std::size_t rounds, const InterceptResend& strategy, Rng& rng);

/// Same flow against a man in the middle.
DetectionStats attack_mitm(std::size_t rounds, const ManInTheMiddle& adversary, Rng& rng);

/// Single-peer pass statistics when the claimed phase differs from the sent
/// one by `delta`; expected detection sin^2(delta/2).
DetectionStats phase_offset_detection(std::size_t rounds, double delta, Rng& rng);

struct AncillaReading {
  double theta = 0.0;
  std::array<double, 2> z{};          // analytic P(0), P(1)
  std::array<double, 2> x{};
  std::array<double, 2> z_sampled{};
  std::array<double, 2> x_sampled{};
  Eigen::Matrix2cd rho;               // analytic ancilla marginal
  double swap_p0 = 1.0;               // attacked copy vs honest copy
};

struct LeakReport {
  EntangleMeasure params;
  std::size_t shots = 0;
  std::vector<AncillaReading> readings;
  double max_tv_analytic = 0.0;
  double max_tv_sampled = 0.0;
  double max_marginal_deviation = 0.0;  // max |rho(theta) - rho(theta')|

  nlohmann::json to_json() const;
};

/// Attacks a fresh block of each relative phase in `thetas`, then reads the
/// ancilla in Z and X. ParameterError for non-unitary parameters.
LeakReport attack_entangle_measure(const EntangleMeasure& params, std::span<const double> thetas,
                                   std::size_t shots, Rng& rng);

/// Random valid (a, b, c, d).
EntangleMeasure random_entangle_params(Rng& rng);

}  // namespace qnft::protocol
