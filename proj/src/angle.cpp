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

#include "qnft/angle.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "qnft/errors.hpp"

namespace qnft {

namespace {

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

double parse_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParameterError("cannot parse angle '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

double parse_angle(std::string_view text) {
  const std::string s = strip(text);
  if (s.empty()) throw ParameterError("empty angle");
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) return parse_number(s, text);

  // [sign][coef][*]pi[/denom]
  std::string coef = s.substr(0, pi_pos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double factor = 1.0;
  if (coef == "-") {
    factor = -1.0;
  } else if (coef == "+") {
    factor = 1.0;
  } else if (!coef.empty()) {
    factor = parse_number(coef, text);
  }
  std::string rest = s.substr(pi_pos + 2);
  double denom = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ParameterError("cannot parse angle '" + std::string(text) + "'");
    denom = parse_number(std::string_view(rest).substr(1), text);
    if (denom == 0.0) throw ParameterError("angle denominator is zero");
  }
  return factor * std::numbers::pi / denom;
}

double angle_from_json(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return parse_angle(value.get<std::string>());
  throw ParameterError("angle must be a number or a string such as \"pi/16\"");
}

}  // namespace qnft
