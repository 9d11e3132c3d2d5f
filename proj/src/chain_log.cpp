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

#include "qnft/chain_log.hpp"

#include <fstream>
#include <sstream>

#include "qnft/errors.hpp"

namespace qnft::ledger {

namespace {

using nlohmann::json;

ConfigError log_error(std::size_t line, const std::string& what) {
  return ConfigError("chain log line " + std::to_string(line), what);
}

Block block_from_json(const json& rec, const codec::PhaseEncoding& enc) {
  Block b;
  b.index = rec.at("m").get<int>();
  b.theta_a = rec.at("theta_a").get<double>();
  b.theta_b = rec.at("theta_b").get<double>();
  if (rec.contains("owner_bits") && !rec["owner_bits"].is_null()) {
    b.owner = codec::InfoPayload{rec["owner_bits"].get<std::string>(), b.index};
  }
  if (rec.contains("token") && !rec["token"].is_null()) {
    const auto& t = rec["token"];
    codec::Token token;
    token.bits = t.at("bits").get<std::string>();
    token.peer_index = t.at("k").get<int>();
    token.theta1 = t.at("theta1").get<double>();
    token.theta = b.theta_b;
    b.token = std::move(token);
  }
  b.check_records(enc);
  return b;
}

}  // namespace

ChainLog::ChainLog(const codec::PhaseEncoding& encoding, const ChainOptions& options) {
  records_.push_back(json{
      {"type", "genesis"},
      {"schema", kChainLogSchema},
      {"encoding", {{"theta1", encoding.theta1}, {"base", encoding.base}, {"info_bits", encoding.info_bits}}},
      {"options",
       {{"link_phase", options.link_phase},
        {"enforce_budget", options.enforce_budget},
        {"decompose_ccp", options.decompose_ccp},
        {"max_blocks", options.max_blocks}}},
  });
}

void ChainLog::add_block(const Block& block, int round, std::span<const VerifierOutcome> verifiers) {
  if (records_.empty()) throw ProtocolError("chain log has no genesis record");
  json rec = {{"type", "block"}, {"m", block.index}, {"round", round},
              {"theta_a", block.theta_a}, {"theta_b", block.theta_b}};
  rec["owner_bits"] = block.owner ? json(block.owner->bits) : json(nullptr);
  rec["token"] = block.token ? json{{"bits", block.token->bits},
                                    {"k", block.token->peer_index},
                                    {"theta1", block.token->theta1}}
                             : json(nullptr);
  auto v = json::array();
  for (const auto& o : verifiers) v.push_back({{"peer", o.peer}, {"outcome", o.outcome}});
  rec["verifiers"] = std::move(v);
  records_.push_back(std::move(rec));
}

void ChainLog::add_event(json event) {
  if (records_.empty()) throw ProtocolError("chain log has no genesis record");
  if (!event.is_object() || !event.contains("type") || !event["type"].is_string()) {
    throw ProtocolError("chain log events need a string \"type\"");
  }
  const auto type = event["type"].get<std::string>();
  if (type == "genesis" || type == "block") throw ProtocolError("reserved chain log record type: " + type);
  records_.push_back(std::move(event));
}

std::string ChainLog::serialize() const {
  std::string out;
  for (const auto& r : records_) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

ChainLog ChainLog::parse(std::string_view text) {
  ChainLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  int expected_block = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw log_error(lineno, e.what());
    }
    if (!rec.is_object() || !rec.contains("type") || !rec["type"].is_string()) {
      throw log_error(lineno, "record needs a string \"type\"");
    }
    const auto type = rec["type"].get<std::string>();
    if (log.records_.empty()) {
      if (type != "genesis") throw log_error(lineno, "first record must be genesis");
      if (rec.value("schema", "") != kChainLogSchema) {
        throw log_error(lineno, "unsupported schema, expected " + std::string(kChainLogSchema));
      }
    } else if (type == "genesis") {
      throw log_error(lineno, "duplicate genesis record");
    } else if (type == "block") {
      try {
        if (rec.at("m").get<int>() != expected_block) throw log_error(lineno, "block out of order");
        block_from_json(rec, log.encoding());
      } catch (const json::exception& e) {
        throw log_error(lineno, e.what());
      } catch (const CodecError& e) {
        throw log_error(lineno, e.what());
      }
      ++expected_block;
    }
    log.records_.push_back(std::move(rec));
  }
  if (log.records_.empty()) throw log_error(0, "empty chain log");
  return log;
}

void ChainLog::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ProtocolError("cannot write chain log " + path.string());
  out << serialize();
}

ChainLog ChainLog::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open chain log");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

codec::PhaseEncoding ChainLog::encoding() const {
  if (records_.empty()) throw ProtocolError("chain log has no genesis record");
  const auto& e = records_.front().at("encoding");
  return {e.at("theta1").get<double>(), e.at("base").get<int>(), e.at("info_bits").get<int>()};
}

ChainOptions ChainLog::options() const {
  if (records_.empty()) throw ProtocolError("chain log has no genesis record");
  const auto& o = records_.front().at("options");
  ChainOptions opts;
  opts.link_phase = o.at("link_phase").get<double>();
  opts.enforce_budget = o.at("enforce_budget").get<bool>();
  opts.decompose_ccp = o.at("decompose_ccp").get<bool>();
  opts.max_blocks = o.at("max_blocks").get<int>();
  return opts;
}

std::vector<Block> ChainLog::blocks() const {
  std::vector<Block> out;
  const auto enc = encoding();
  for (const auto& r : records_) {
    if (r.at("type") == "block") out.push_back(block_from_json(r, enc));
  }
  return out;
}

ChainState ChainLog::replay() const {
  ChainState chain(encoding(), options());
  for (const auto& b : blocks()) chain.append(b);
  return chain;
}

}  // namespace qnft::ledger
