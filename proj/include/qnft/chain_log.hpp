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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qnft/ledger.hpp"

namespace qnft::ledger {

inline constexpr std::string_view kChainLogSchema = "qnft.chain/1";

struct VerifierOutcome {
  std::string peer;
  std::string outcome;  // plus | minus | leak01 | leak10 | rejected
};

/// Append-only record of a chain, one JSON object per line.
///
///   {"type":"genesis","schema":"qnft.chain/1","encoding":{...},"options":{...}}
///   {"type":"block","m":1,"round":0,"theta_a":..,"theta_b":..,
///    "owner_bits":"110"|null,"token":{"bits":"..","k":1,"theta1":..}|null,
///    "verifiers":[{"peer":"p1","outcome":"plus"},...]}
///   {"type":"reward"|"slash"|"abort", "round":.., ...}
///
/// The genesis record is always first; block records appear in index order.
class ChainLog {
 public:
  ChainLog() = default;
  ChainLog(const codec::PhaseEncoding& encoding, const ChainOptions& options);

  void add_block(const Block& block, int round, std::span<const VerifierOutcome> verifiers);
  /// Consensus events; `event` must carry a string "type" other than
  /// genesis/block.
  void add_event(nlohmann::json event);

  const std::vector<nlohmann::json>& records() const noexcept { return records_; }

  std::string serialize() const;
  static ChainLog parse(std::string_view text);

  void save(const std::filesystem::path& path) const;
  static ChainLog load(const std::filesystem::path& path);

  codec::PhaseEncoding encoding() const;
  ChainOptions options() const;
  std::vector<Block> blocks() const;

  /// Chain rebuilt from the genesis parameters and block records.
  ChainState replay() const;

 private:
  std::vector<nlohmann::json> records_;
};

}  // namespace qnft::ledger
