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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnft/rng.hpp"

namespace qnft::consensus {

struct StakeEntry {
  std::string peer;
  double coins = 0.0;
  std::int64_t holding_time = 0;  // ticks

  double stake() const { return coins * static_cast<double>(holding_time); }
};

struct StakePolicy {
  /// Every reward must stay strictly below this.
  double min_stake = 10.0;
  bool reset_on_slash = true;
  bool reset_on_win = true;
};

/// Coin-age stakes kept in peer insertion order.
class StakeLedger {
 public:
  explicit StakeLedger(StakePolicy policy = {});

  /// ParameterError for negative coins/time, ConsensusError for a duplicate id.
  void add_peer(std::string peer, double coins, std::int64_t holding_time = 0);

  bool contains(const std::string& peer) const;
  const StakeEntry& entry(const std::string& peer) const;
  const std::vector<StakeEntry>& entries() const noexcept { return entries_; }
  const StakePolicy& policy() const noexcept { return policy_; }
  double stake(const std::string& peer) const { return entry(peer).stake(); }
  double total_stake() const;

  /// Peer drawn with probability stake / total. ConsensusError on zero total.
  const std::string& select_validator(Rng& rng) const;

  /// Removes `fraction` of the peer's coins; 0 < fraction <= 1.
  void slash(const std::string& peer, double fraction);
  /// PolicyError unless 0 <= amount < min_stake.
  void reward(const std::string& peer, double amount);
  void advance_time(std::int64_t ticks);
  /// Applies the coin-age reset for a validator that won a round.
  void record_win(const std::string& peer);

  nlohmann::json to_json() const;

 private:
  StakeEntry& mutable_entry(const std::string& peer);

  StakePolicy policy_;
  std::vector<StakeEntry> entries_;
};

/// Pearson chi-square statistic and upper-tail p-value of `observed` counts
/// against `expected` probabilities. Zero-probability cells must be empty.
struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};
ChiSquare chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> expected);

}  // namespace qnft::consensus
