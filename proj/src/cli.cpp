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

#include "qnft/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "qnft/angle.hpp"
#include "qnft/errors.hpp"
#include "qnft/ledger.hpp"
#include "qnft/sim/density_matrix.hpp"

namespace qnft::cli {

using nlohmann::json;

namespace {

// ---- config parsing -------------------------------------------------------

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  expect_object(j, path);
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(join(path, key), "unknown field");
    }
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

double angle(const json& j, const std::string& path) {
  try {
    return angle_from_json(j);
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

protocol::Complex complex_number(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], join(path, 0)), number(j[1], join(path, 1))};
  throw ConfigError(path, "expected a number or [re, im]");
}

void in_range(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

protocol::GuessStrategy guess_strategy(const json& j, const std::string& path) {
  const auto s = string(j, path);
  if (s == "uniform") return protocol::GuessStrategy::Uniform;
  if (s == "fixed_offset") return protocol::GuessStrategy::FixedOffset;
  if (s == "exact") return protocol::GuessStrategy::Exact;
  throw ConfigError(path, "expected uniform, fixed_offset or exact");
}

/// Adversary object; `extra` lists keys the caller handles itself.
protocol::Adversary parse_adversary(const json& j, const std::string& path, std::initializer_list<const char*> extra) {
  expect_object(j, path);
  if (!j.contains("kind")) throw ConfigError(join(path, "kind"), "missing");
  const auto kind = string(j["kind"], join(path, "kind"));
  std::set<std::string> allowed{"kind"};
  for (const char* e : extra) allowed.insert(e);
  protocol::Adversary result;
  if (kind == "none") {
    result = protocol::NoAdversary{};
  } else if (kind == "phase_offset") {
    allowed.insert({"delta", "target"});
    protocol::PhaseOffset a;
    if (j.contains("delta")) a.delta = angle(j["delta"], join(path, "delta"));
    if (j.contains("target")) a.target = string(j["target"], join(path, "target"));
    result = a;
  } else if (kind == "intercept_resend") {
    allowed.insert({"guess", "offset"});
    protocol::InterceptResend a;
    if (j.contains("guess")) a.guess = guess_strategy(j["guess"], join(path, "guess"));
    if (j.contains("offset")) a.offset = angle(j["offset"], join(path, "offset"));
    result = a;
  } else if (kind == "entangle_measure") {
    allowed.insert({"a", "b", "c", "d"});
    protocol::EntangleMeasure a;
    if (j.contains("a")) a.a = complex_number(j["a"], join(path, "a"));
    if (j.contains("b")) a.b = complex_number(j["b"], join(path, "b"));
    if (j.contains("c")) a.c = complex_number(j["c"], join(path, "c"));
    if (j.contains("d")) a.d = complex_number(j["d"], join(path, "d"));
    try {
      protocol::entangle_unitary(a);
    } catch (const ParameterError& e) {
      throw ConfigError(path, e.what());
    }
    result = a;
  } else if (kind == "mitm") {
    allowed.insert({"has_secret", "forge"});
    protocol::ManInTheMiddle a;
    if (j.contains("has_secret")) a.has_secret = boolean(j["has_secret"], join(path, "has_secret"));
    if (j.contains("forge")) a.forge = boolean(j["forge"], join(path, "forge"));
    result = a;
  } else {
    throw ConfigError(join(path, "kind"), "unknown adversary '" + kind + "'");
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown field for " + kind);
  }
  return result;
}

void parse_peers(const json& j, GenesisConfig& cfg) {
  if (!j.is_array() || j.empty()) throw ConfigError("peers", "expected a non-empty array");
  std::set<std::string> seen;
  cfg.peers.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto path = join("peers", i);
    expect_keys(j[i], path, {"id", "coins"});
    if (!j[i].contains("id")) throw ConfigError(join(path, "id"), "missing");
    PeerSpec p;
    p.id = string(j[i]["id"], join(path, "id"));
    in_range(!p.id.empty(), join(path, "id"), "must not be empty");
    in_range(seen.insert(p.id).second, join(path, "id"), "duplicate peer '" + p.id + "'");
    if (j[i].contains("coins")) p.coins = number(j[i]["coins"], join(path, "coins"));
    in_range(std::isfinite(p.coins) && p.coins >= 0.0, join(path, "coins"), "must be a non-negative number");
    cfg.peers.push_back(std::move(p));
  }
}

void parse_encoding(const json& j, GenesisConfig& cfg) {
  const std::string path = "encoding";
  expect_keys(j, path, {"theta1", "base", "info_bits", "token_qubits", "token_theta1", "token_k"});
  auto& net = cfg.network;
  if (j.contains("theta1")) net.encoding.theta1 = angle(j["theta1"], join(path, "theta1"));
  if (j.contains("base")) net.encoding.base = static_cast<int>(integer(j["base"], join(path, "base")));
  if (j.contains("info_bits")) {
    net.encoding.info_bits = static_cast<int>(integer(j["info_bits"], join(path, "info_bits")));
  }
  try {
    net.encoding.validate();
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  if (j.contains("token_qubits")) {
    net.token_qubits = static_cast<int>(integer(j["token_qubits"], join(path, "token_qubits")));
  }
  in_range(net.token_qubits >= 1 && net.token_qubits <= codec::kMaxTokenQubits, join(path, "token_qubits"),
           "must be in 1.." + std::to_string(codec::kMaxTokenQubits));
  if (j.contains("token_theta1")) net.token_theta1 = angle(j["token_theta1"], join(path, "token_theta1"));
  if (j.contains("token_k")) net.token_k = static_cast<int>(integer(j["token_k"], join(path, "token_k")));
  in_range(net.token_k >= 0, join(path, "token_k"), "must be >= 0 (0 = number of peers)");
}

void parse_chain(const json& j, GenesisConfig& cfg) {
  const std::string path = "chain";
  expect_keys(j, path, {"link_phase", "enforce_budget", "decompose_ccp", "max_blocks"});
  auto& opt = cfg.network.chain;
  if (j.contains("link_phase")) opt.link_phase = angle(j["link_phase"], join(path, "link_phase"));
  if (j.contains("enforce_budget")) opt.enforce_budget = boolean(j["enforce_budget"], join(path, "enforce_budget"));
  if (j.contains("decompose_ccp")) opt.decompose_ccp = boolean(j["decompose_ccp"], join(path, "decompose_ccp"));
  if (j.contains("max_blocks")) opt.max_blocks = static_cast<int>(integer(j["max_blocks"], join(path, "max_blocks")));
  in_range(opt.max_blocks >= 1 && opt.max_blocks <= ledger::kMaxBlocks, join(path, "max_blocks"),
           "must be in 1.." + std::to_string(ledger::kMaxBlocks));
}

void parse_policy(const json& j, GenesisConfig& cfg) {
  const std::string path = "policy";
  expect_keys(j, path, {"min_stake", "reward", "slash_fraction", "quorum", "reset_on_slash", "reset_on_win"});
  auto& pol = cfg.policy;
  auto& net = cfg.network;
  if (j.contains("min_stake")) pol.min_stake = number(j["min_stake"], join(path, "min_stake"));
  in_range(pol.min_stake > 0.0, join(path, "min_stake"), "must be positive");
  if (j.contains("reward")) net.reward = number(j["reward"], join(path, "reward"));
  in_range(net.reward >= 0.0, join(path, "reward"), "must be non-negative");
  in_range(net.reward < pol.min_stake, join(path, "reward"), "must stay below min_stake");
  if (j.contains("slash_fraction")) net.slash_fraction = number(j["slash_fraction"], join(path, "slash_fraction"));
  in_range(net.slash_fraction > 0.0 && net.slash_fraction <= 1.0, join(path, "slash_fraction"), "must be in (0, 1]");
  if (j.contains("quorum")) net.quorum = number(j["quorum"], join(path, "quorum"));
  in_range(net.quorum > 0.0 && net.quorum <= 1.0, join(path, "quorum"), "must be in (0, 1]");
  if (j.contains("reset_on_slash")) pol.reset_on_slash = boolean(j["reset_on_slash"], join(path, "reset_on_slash"));
  if (j.contains("reset_on_win")) pol.reset_on_win = boolean(j["reset_on_win"], join(path, "reset_on_win"));
}

void parse_blocks(const json& j, GenesisConfig& cfg) {
  if (!j.is_array()) throw ConfigError("blocks", "expected an array of [theta_a, theta_b]");
  cfg.blocks.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto path = join("blocks", i);
    codec::PhasePair pair;
    if (j[i].is_array() && j[i].size() == 2) {
      pair = {angle(j[i][0], join(path, 0)), angle(j[i][1], join(path, 1))};
    } else if (j[i].is_object()) {
      expect_keys(j[i], path, {"theta_a", "theta_b"});
      if (j[i].contains("theta_a")) pair.theta_a = angle(j[i]["theta_a"], join(path, "theta_a"));
      if (j[i].contains("theta_b")) pair.theta_b = angle(j[i]["theta_b"], join(path, "theta_b"));
    } else {
      throw ConfigError(path, "expected [theta_a, theta_b] or {theta_a, theta_b}");
    }
    cfg.blocks.push_back(pair);
  }
  in_range(static_cast<int>(cfg.blocks.size()) <= cfg.network.chain.max_blocks, "blocks",
           "more blocks than chain.max_blocks");
  if (cfg.network.chain.enforce_budget && !codec::validate_budget(cfg.blocks)) {
    std::ostringstream msg;
    msg << "blocks: phase budget violated, sum(theta_a + theta_b) = " << codec::phase_sum(cfg.blocks)
        << " must stay below pi";
    throw ConstraintError(msg.str());
  }
}

void parse_attack(const json& j, GenesisConfig& cfg) {
  const std::string path = "attack";
  expect_object(j, path);
  auto& spec = cfg.attack;
  if (j.contains("kind")) {
    spec.adversary = parse_adversary(j, path, {"rounds", "thetas", "random_params"});
  } else {
    expect_keys(j, path, {"rounds", "thetas", "random_params"});
  }
  if (j.contains("rounds")) {
    const auto r = integer(j["rounds"], join(path, "rounds"));
    in_range(r >= 1, join(path, "rounds"), "must be >= 1");
    spec.rounds = static_cast<std::size_t>(r);
  }
  if (j.contains("thetas")) {
    const auto& t = j["thetas"];
    if (!t.is_array() || t.empty()) throw ConfigError(join(path, "thetas"), "expected a non-empty array");
    spec.thetas.clear();
    for (std::size_t i = 0; i < t.size(); ++i) spec.thetas.push_back(angle(t[i], join(join(path, "thetas"), i)));
  }
  if (j.contains("random_params")) spec.random_params = boolean(j["random_params"], join(path, "random_params"));
}

void parse_calibration(const json& j, GenesisConfig& cfg) {
  const std::string path = "calibration";
  expect_keys(j, path, {"target", "seeds", "tolerance", "p_max", "max_iterations"});
  auto& c = cfg.calibration;
  if (j.contains("target")) cfg.calibration_target = number(j["target"], join(path, "target"));
  in_range(cfg.calibration_target > 0.0 && cfg.calibration_target <= 1.0, join(path, "target"), "must be in (0, 1]");
  if (j.contains("seeds")) c.seeds = static_cast<int>(integer(j["seeds"], join(path, "seeds")));
  in_range(c.seeds >= 1, join(path, "seeds"), "must be >= 1");
  if (j.contains("tolerance")) c.tolerance = number(j["tolerance"], join(path, "tolerance"));
  in_range(c.tolerance > 0.0, join(path, "tolerance"), "must be positive");
  if (j.contains("p_max")) c.p_max = number(j["p_max"], join(path, "p_max"));
  in_range(c.p_max > 0.0 && c.p_max <= 1.0, join(path, "p_max"), "must be in (0, 1]");
  if (j.contains("max_iterations")) c.max_iterations = static_cast<int>(integer(j["max_iterations"], join(path, "max_iterations")));
  in_range(c.max_iterations >= 1, join(path, "max_iterations"), "must be >= 1");
}

std::vector<PeerSpec> default_peers() {
  std::vector<PeerSpec> peers;
  for (int i = 0; i < 5; ++i) peers.push_back({"peer" + std::to_string(i), 10.0 * (i + 1)});
  return peers;
}

}  // namespace

GenesisConfig parse_config(const json& doc) {
  expect_keys(doc, "", {"seed", "peers", "encoding", "chain", "policy", "noise", "shots", "rounds", "owners", "blocks",
                        "adversary", "attack", "calibration", "parallel_verify"});
  GenesisConfig cfg;
  cfg.peers = default_peers();
  if (doc.contains("seed")) {
    const auto& s = doc["seed"];
    if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
    cfg.seed_given = true;
  }
  if (doc.contains("peers")) parse_peers(doc["peers"], cfg);
  if (doc.contains("encoding")) parse_encoding(doc["encoding"], cfg);
  if (doc.contains("chain")) parse_chain(doc["chain"], cfg);
  if (doc.contains("policy")) parse_policy(doc["policy"], cfg);
  if (doc.contains("noise") && !doc["noise"].is_null()) {
    const double p = number(doc["noise"], "noise");
    in_range(p >= 0.0 && p <= 1.0, "noise", "must be in [0, 1] or null");
    cfg.noise = p;
  }
  if (doc.contains("shots")) {
    const auto s = integer(doc["shots"], "shots");
    in_range(s >= 1, "shots", "must be >= 1");
    cfg.shots = static_cast<std::size_t>(s);
  }
  if (doc.contains("rounds")) {
    cfg.rounds = static_cast<int>(integer(doc["rounds"], "rounds"));
    in_range(cfg.rounds >= 0, "rounds", "must be >= 0");
    cfg.rounds_given = true;
  }
  if (doc.contains("owners")) {
    const auto& o = doc["owners"];
    if (!o.is_array() || o.empty()) throw ConfigError("owners", "expected a non-empty array of bit strings");
    cfg.owners.clear();
    for (std::size_t i = 0; i < o.size(); ++i) {
      const auto bits = string(o[i], join("owners", i));
      in_range(static_cast<int>(bits.size()) == cfg.network.encoding.info_bits &&
                   bits.find_first_not_of("01") == std::string::npos,
               join("owners", i), "expected " + std::to_string(cfg.network.encoding.info_bits) + " bits of 0/1");
      cfg.owners.push_back(bits);
    }
  }
  if (doc.contains("blocks")) parse_blocks(doc["blocks"], cfg);
  if (doc.contains("adversary")) cfg.adversary = parse_adversary(doc["adversary"], "adversary", {});
  if (const auto* t = std::get_if<protocol::PhaseOffset>(&cfg.adversary); t && t->target) {
    const bool known = std::any_of(cfg.peers.begin(), cfg.peers.end(), [&](const PeerSpec& p) { return p.id == *t->target; });
    in_range(known, "adversary.target", "unknown peer '" + *t->target + "'");
  }
  if (doc.contains("attack")) parse_attack(doc["attack"], cfg);
  if (doc.contains("calibration")) parse_calibration(doc["calibration"], cfg);
  if (doc.contains("parallel_verify")) cfg.network.parallel_verify = boolean(doc["parallel_verify"], "parallel_verify");
  return cfg;
}

GenesisConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

namespace {

// ---- commands -------------------------------------------------------------

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;
  std::optional<double> noise;
  std::optional<int> rounds;
  std::string out = "qnft-out";
  bool strict = false;
  std::string kind;
  std::optional<double> target;
};

class InvariantBreach : public Error {
 public:
  using Error::Error;
};

GenesisConfig resolve(const Flags& flags) {
  GenesisConfig cfg = flags.config.empty() ? parse_config(json::object()) : load_config(flags.config);
  if (flags.seed) {
    cfg.seed = *flags.seed;
    cfg.seed_given = true;
  }
  if (!cfg.seed_given && std::getenv("CI") != nullptr) {
    throw ConfigError("--seed", "required when CI is set");
  }
  if (flags.shots) {
    in_range(*flags.shots >= 1, "--shots", "must be >= 1");
    cfg.shots = *flags.shots;
  }
  if (flags.noise) {
    in_range(*flags.noise >= 0.0 && *flags.noise <= 1.0, "--noise", "must be in [0, 1]");
    cfg.noise = *flags.noise;
  }
  if (flags.rounds) {
    in_range(*flags.rounds >= 0, "--rounds", "must be >= 0");
    cfg.rounds = *flags.rounds;
    cfg.rounds_given = true;
  }
  if (flags.target) {
    in_range(*flags.target > 0.0 && *flags.target <= 1.0, "--target", "must be in (0, 1]");
    cfg.calibration_target = *flags.target;
  }
  return cfg;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::filesystem::path output_dir(const Flags& flags) {
  std::filesystem::path dir(flags.out);
  std::filesystem::create_directories(dir);
  return dir;
}

json config_summary(const GenesisConfig& cfg) {
  json peers = json::array();
  for (const auto& p : cfg.peers) peers.push_back({{"id", p.id}, {"coins", p.coins}});
  return {{"seed", cfg.seed},
          {"peers", peers},
          {"noise", cfg.noise ? json(*cfg.noise) : json(nullptr)},
          {"shots", cfg.shots},
          {"adversary", protocol::adversary_name(cfg.adversary)}};
}

struct RoundsOutcome {
  std::vector<protocol::RoundReport> reports;
  int aborts = 0;
};

/// Blocks preset: one round per listed block (or --rounds of them).
int planned_rounds(const GenesisConfig& cfg) {
  if (cfg.blocks.empty()) return cfg.rounds;
  if (!cfg.rounds_given) return static_cast<int>(cfg.blocks.size());
  in_range(cfg.rounds <= static_cast<int>(cfg.blocks.size()), "rounds", "exceeds the number of preset blocks");
  return cfg.rounds;
}

RoundsOutcome run_rounds(protocol::Network& net, const GenesisConfig& cfg, std::ostream& out) {
  RoundsOutcome outcome;
  const int n = planned_rounds(cfg);
  std::size_t next_block = 0;
  for (int r = 0; r < n; ++r) {
    protocol::RoundReport report;
    if (cfg.blocks.empty()) {
      report = net.mint_round(cfg.owners[static_cast<std::size_t>(r) % cfg.owners.size()]);
    } else {
      ledger::Block block;
      block.theta_a = cfg.blocks[next_block].theta_a;
      block.theta_b = cfg.blocks[next_block].theta_b;
      report = net.mint_block(block);
      // An aborted preset round is retried with the same phases next time.
      if (report.committed) ++next_block;
    }
    out << "round " << report.round << " m=" << report.m << " validator=" << report.winner << ' '
        << (report.committed ? "committed" : "aborted: " + report.abort_reason) << '\n';
    if (!report.committed) ++outcome.aborts;
    outcome.reports.push_back(std::move(report));
  }
  return outcome;
}

/// Cross-peer agreement and closed-form equality of every register.
void check_invariants(const protocol::Network& net) {
  if (!net.logs_identical()) throw InvariantBreach("peer chain logs diverged");
  for (const auto& p : net.peers()) {
    const auto& reg = p.chain.register_state();
    const auto ideal = ledger::closed_form(p.chain);
    if (reg.has_value() != ideal.has_value()) throw InvariantBreach("register presence mismatch at " + p.id);
    if (reg && (reg->amplitudes() - ideal->amplitudes()).cwiseAbs().maxCoeff() > 1e-9) {
      throw InvariantBreach("register of " + p.id + " departs from the closed form");
    }
  }
}

protocol::Network make_network(const GenesisConfig& cfg) {
  consensus::StakeLedger stakes(cfg.policy);
  for (const auto& p : cfg.peers) stakes.add_peer(p.id, p.coins);
  protocol::Network net(cfg.network, std::move(stakes), cfg.seed);
  net.channel().set_adversary(cfg.adversary);
  return net;
}

json rounds_document(const GenesisConfig& cfg, const protocol::Network& net, const RoundsOutcome& outcome) {
  json rounds = json::array();
  for (const auto& r : outcome.reports) rounds.push_back(r.to_json());
  return {{"schema", "qnft.rounds/1"},
          {"config", config_summary(cfg)},
          {"rounds", rounds},
          {"committed", static_cast<int>(outcome.reports.size()) - outcome.aborts},
          {"aborted", outcome.aborts},
          {"chain_length", net.chain_length()},
          {"stakes", net.stakes().to_json()}};
}

std::uint64_t stream_seed(const GenesisConfig& cfg, std::uint64_t stream) { return Rng::derive_seed(cfg.seed, stream); }

/// Tomography of the final chain plus plot data. Returns the fidelity.
double emit_tomography(const GenesisConfig& cfg, const ledger::ChainState& chain, const std::filesystem::path& dir,
                       std::ostream& out) {
  Rng rng(stream_seed(cfg, 0x70));
  const double p = cfg.noise.value_or(0.0);
  const auto result = tomography::run_tomography(chain, p, cfg.shots, rng);
  json doc = result.to_json();
  doc["schema"] = "qnft.tomography/1";
  doc["seed"] = cfg.seed;
  doc["blocks"] = chain.size();
  write_json(dir / kTomographyFile, doc);
  write_json(dir / kCityFile, tomography::export_city(result.rho));
  write_json(dir / kHintonFile, tomography::export_hinton(result.rho));
  out << "tomography shots=" << cfg.shots << " noise=" << p << " fidelity=" << result.fidelity << '\n';
  return result.fidelity;
}

int cmd_mint(const Flags& flags, std::ostream& out, bool with_tomography) {
  const auto cfg = resolve(flags);
  auto net = make_network(cfg);
  const auto dir = output_dir(flags);
  const auto outcome = run_rounds(net, cfg, out);
  check_invariants(net);
  net.peers().front().log.save(dir / kChainFile);
  write_json(dir / kRoundsFile, rounds_document(cfg, net, outcome));
  out << "chain length " << net.chain_length() << ", " << outcome.aborts << " aborted round(s)\n";
  if (with_tomography && net.chain_length() > 0) {
    const auto& chain = net.peers().front().chain;
    if (chain.size() * 2 <= tomography::kMaxTomographyQubits) {
      emit_tomography(cfg, chain, dir, out);
    } else {
      // Too wide for tomography; plot the exact final register instead.
      const auto rho = sim::to_density(*chain.register_state());
      write_json(dir / kCityFile, tomography::export_city(rho));
      write_json(dir / kHintonFile, tomography::export_hinton(rho));
      out << "tomography skipped: " << chain.size() * 2 << " qubits\n";
    }
  }
  if (flags.strict && outcome.aborts > 0) return kExitAbort;
  return kExitOk;
}

/// Chain built by honest rounds (or the blocks preset) without writing logs.
ledger::ChainState build_chain(const GenesisConfig& cfg, std::ostream& out) {
  GenesisConfig honest = cfg;
  honest.adversary = protocol::NoAdversary{};
  auto net = make_network(honest);
  run_rounds(net, honest, out);
  check_invariants(net);
  return net.peers().front().chain;
}

int cmd_tomo(const Flags& flags, std::ostream& out) {
  const auto cfg = resolve(flags);
  const auto chain = build_chain(cfg, out);
  emit_tomography(cfg, chain, output_dir(flags), out);
  return kExitOk;
}

int cmd_calibrate(const Flags& flags, std::ostream& out) {
  const auto cfg = resolve(flags);
  const auto chain = build_chain(cfg, out);
  Rng rng(stream_seed(cfg, 0xca));
  const auto result = tomography::calibrate_noise_to_fidelity(cfg.calibration_target, chain, cfg.shots, rng,
                                                              cfg.calibration);
  json doc = result.to_json();
  doc["schema"] = "qnft.calibration/1";
  doc["seed"] = cfg.seed;
  doc["shots"] = cfg.shots;
  write_json(output_dir(flags) / kCalibrationFile, doc);
  out << "calibrated p=" << result.p << " mean fidelity=" << result.mean_fidelity
      << (result.monotone ? "" : " (trace not monotone)") << '\n';
  return kExitOk;
}

protocol::Adversary adversary_for_kind(const std::string& kind, const protocol::Adversary& configured) {
  if (kind.empty() || kind == protocol::adversary_name(configured)) return configured;
  if (kind == "intercept_resend") return protocol::InterceptResend{};
  if (kind == "mitm") return protocol::ManInTheMiddle{};
  if (kind == "entangle_measure") return protocol::EntangleMeasure{};
  if (kind == "phase_offset") return protocol::PhaseOffset{std::numbers::pi, std::nullopt};
  throw ConfigError("--kind", "expected intercept_resend, mitm, entangle_measure or phase_offset");
}

int cmd_attack(const Flags& flags, std::ostream& out) {
  const auto cfg = resolve(flags);
  AttackSpec spec = cfg.attack;
  spec.adversary = adversary_for_kind(flags.kind, spec.adversary);
  if (flags.rounds) {
    in_range(*flags.rounds >= 1, "--rounds", "must be >= 1 for attack");
    spec.rounds = static_cast<std::size_t>(*flags.rounds);
  }
  Rng rng(stream_seed(cfg, 0xa7));
  json report;
  std::string summary;
  if (const auto* ir = std::get_if<protocol::InterceptResend>(&spec.adversary)) {
    const auto stats = protocol::attack_intercept_resend(spec.rounds, *ir, rng);
    report = stats.to_json();
    report["within_3sigma"] = stats.within(3.0);
  } else if (const auto* mitm = std::get_if<protocol::ManInTheMiddle>(&spec.adversary)) {
    const auto stats = protocol::attack_mitm(spec.rounds, *mitm, rng);
    report = stats.to_json();
    report["within_3sigma"] = stats.within(3.0);
  } else if (const auto* po = std::get_if<protocol::PhaseOffset>(&spec.adversary)) {
    const auto stats = protocol::phase_offset_detection(spec.rounds, po->delta, rng);
    report = stats.to_json();
    report["within_3sigma"] = stats.within(3.0);
  } else if (const auto* em = std::get_if<protocol::EntangleMeasure>(&spec.adversary)) {
    const auto params = spec.random_params ? protocol::random_entangle_params(rng) : *em;
    std::vector<double> thetas = spec.thetas;
    if (thetas.empty()) thetas = {std::numbers::pi / 16, std::numbers::pi / 4, 3 * std::numbers::pi / 4};
    report = protocol::attack_entangle_measure(params, thetas, cfg.shots, rng).to_json();
    report["attack"] = "entangle_measure";
  } else {
    throw ConfigError("attack.kind", "no attack selected");
  }
  report["schema"] = "qnft.attack/1";
  report["seed"] = cfg.seed;
  write_json(output_dir(flags) / kAttackFile, report);
  if (report.contains("frequency")) {
    out << report["attack"].get<std::string>() << ": detected " << report["detected"] << "/" << report["trials"]
        << " (expected rate " << report["expected"].get<double>() << ")\n";
  } else {
    out << "entangle_measure: max ancilla marginal deviation " << report["max_marginal_deviation"].get<double>()
        << '\n';
  }
  return kExitOk;
}

void add_common_flags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "genesis config (JSON)");
  sub->add_option("--seed", flags.seed, "master seed");
  sub->add_option("--shots", flags.shots, "shots per tomography setting / sampling run");
  sub->add_option("--noise", flags.noise, "depolarizing probability per gate");
  sub->add_option("--rounds", flags.rounds, "mint rounds (attack: trials)");
  sub->add_option("--out", flags.out, "output directory")->capture_default_str();
  sub->add_flag("--strict", flags.strict, "exit 3 when any round aborts");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qnft: quantum NFT chain simulator"};
  app.require_subcommand(1);
  Flags flags;
  auto* demo = app.add_subcommand("demo", "honest mint rounds, chain log, tomography and plot data");
  auto* mint = app.add_subcommand("mint", "mint rounds and write the chain log");
  auto* attack = app.add_subcommand("attack", "run an attack harness");
  auto* tomo = app.add_subcommand("tomo", "tomography of the configured chain");
  auto* calibrate = app.add_subcommand("calibrate", "find the noise level reaching a target fidelity");
  for (auto* sub : {demo, mint, attack, tomo, calibrate}) add_common_flags(sub, flags);
  attack->add_option("--kind", flags.kind, "intercept_resend | mitm | entangle_measure | phase_offset");
  calibrate->add_option("--target", flags.target, "target mean fidelity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*demo) return cmd_mint(flags, out, true);
    if (*mint) return cmd_mint(flags, out, false);
    if (*attack) return cmd_attack(flags, out);
    if (*tomo) return cmd_tomo(flags, out);
    return cmd_calibrate(flags, out);
  } catch (const ConfigError& e) {
    err << "qnft: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConstraintError& e) {
    err << "qnft: constraint error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantBreach& e) {
    err << "qnft: invariant breach: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const CalibrationError& e) {
    err << "qnft: calibration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TomographyError& e) {
    err << "qnft: tomography error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConsensusError& e) {
    err << "qnft: consensus error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError& e) {
    err << "qnft: capacity error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "qnft: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "qnft: internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace qnft::cli
