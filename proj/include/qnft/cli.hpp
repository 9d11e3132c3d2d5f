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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qnft/codec.hpp"
#include "qnft/consensus.hpp"
#include "qnft/protocol.hpp"
#include "qnft/tomography.hpp"

namespace qnft::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAbort = 3;
inline constexpr int kExitInvariant = 4;

/// Output filenames inside --out.
inline constexpr const char* kChainFile = "chain.jsonl";
inline constexpr const char* kRoundsFile = "rounds.json";
inline constexpr const char* kTomographyFile = "tomography.json";
inline constexpr const char* kCityFile = "city.json";
inline constexpr const char* kHintonFile = "hinton.json";
inline constexpr const char* kAttackFile = "attack.json";
inline constexpr const char* kCalibrationFile = "calibration.json";

struct PeerSpec {
  std::string id;
  double coins = 0.0;
};

/// Harness settings for `attack`. `adversary` carries the kind and its
/// parameters; `random_params` draws entangle-measure coefficients instead.
struct AttackSpec {
  protocol::Adversary adversary = protocol::InterceptResend{};
  std::size_t rounds = 1000;
  std::vector<double> thetas;
  bool random_params = false;
};

struct GenesisConfig {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::vector<PeerSpec> peers;
  protocol::NetworkConfig network;
  consensus::StakePolicy policy;
  std::optional<double> noise;
  std::size_t shots = 8192;
  int rounds = 2;
  bool rounds_given = false;
  std::vector<std::string> owners{"110"};
  /// Fixed (theta_a, theta_b) per round; replaces owner encoding and tokens.
  std::vector<codec::PhasePair> blocks;
  protocol::Adversary adversary = protocol::NoAdversary{};
  AttackSpec attack;
  double calibration_target = 0.8;
  tomography::CalibrationOptions calibration;
};

/// Validates a config document. ConfigError carries the JSON path of the
/// first bad field; an over-budget `blocks` preset raises ConstraintError.
GenesisConfig parse_config(const nlohmann::json& doc);
GenesisConfig load_config(const std::filesystem::path& path);

/// Parses `qnft <command> [flags]` and runs it. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qnft::cli
