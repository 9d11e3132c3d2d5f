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

#include "qnft/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <boost/math/distributions/chi_squared.hpp>

#include "qnft/errors.hpp"

namespace qnft::consensus {

StakeLedger::StakeLedger(StakePolicy policy) : policy_(policy) {
  if (!(policy_.min_stake > 0.0)) throw ParameterError("min_stake must be positive");
}

void StakeLedger::add_peer(std::string peer, double coins, std::int64_t holding_time) {
  if (!(coins >= 0.0) || !std::isfinite(coins)) throw ParameterError("coins must be non-negative");
  if (holding_time < 0) throw ParameterError("holding time must be non-negative");
  if (contains(peer)) throw ConsensusError("peer already staked: " + peer);
  entries_.push_back({std::move(peer), coins, holding_time});
}

bool StakeLedger::contains(const std::string& peer) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.peer == peer; });
}

const StakeEntry& StakeLedger::entry(const std::string& peer) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.peer == peer; });
  if (it == entries_.end()) throw ConsensusError("unknown peer: " + peer);
  return *it;
}

StakeEntry& StakeLedger::mutable_entry(const std::string& peer) {
  return const_cast<StakeEntry&>(std::as_const(*this).entry(peer));
}

double StakeLedger::total_stake() const {
  double total = 0.0;
  for (const auto& e : entries_) total += e.stake();
  return total;
}

const std::string& StakeLedger::select_validator(Rng& rng) const {
  std::vector<double> stakes;
  stakes.reserve(entries_.size());
  for (const auto& e : entries_) stakes.push_back(e.stake());
  if (!(total_stake() > 0.0)) throw ConsensusError("no stake to select a validator from");
  return entries_[rng.pick(stakes)].peer;
}

void StakeLedger::slash(const std::string& peer, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ParameterError("slash fraction must be in (0, 1]");
  auto& e = mutable_entry(peer);
  e.coins = fraction == 1.0 ? 0.0 : e.coins * (1.0 - fraction);
  if (policy_.reset_on_slash) e.holding_time = 0;
}

void StakeLedger::reward(const std::string& peer, double amount) {
  if (!(amount >= 0.0)) throw ParameterError("reward must be non-negative");
  if (amount >= policy_.min_stake) {
    throw PolicyError("reward " + std::to_string(amount) + " is not below the minimum stake " +
                      std::to_string(policy_.min_stake));
  }
  mutable_entry(peer).coins += amount;
}

void StakeLedger::advance_time(std::int64_t ticks) {
  if (ticks < 0) throw ParameterError("time only moves forward");
  for (auto& e : entries_) e.holding_time += ticks;
}

void StakeLedger::record_win(const std::string& peer) {
  auto& e = mutable_entry(peer);
  if (policy_.reset_on_win) e.holding_time = 0;
}

nlohmann::json StakeLedger::to_json() const {
  auto peers = nlohmann::json::array();
  for (const auto& e : entries_) {
    peers.push_back({{"id", e.peer}, {"coins", e.coins}, {"holding_time", e.holding_time}, {"stake", e.stake()}});
  }
  return peers;
}

ChiSquare chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw ParameterError("chi-square needs matching, non-empty cells");
  }
  const double n = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  const double total_p = std::accumulate(expected.begin(), expected.end(), 0.0);
  ChiSquare out;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * expected[i] / total_p;
    if (e == 0.0) {
      if (observed[i] != 0) {
        out.statistic = std::numeric_limits<double>::infinity();
        out.p_value = 0.0;
        return out;
      }
      continue;
    }
    const double d = static_cast<double>(observed[i]) - e;
    out.statistic += d * d / e;
    ++cells;
  }
  out.dof = cells - 1;
  if (out.dof < 1) return out;
  boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

}  // namespace qnft::consensus
