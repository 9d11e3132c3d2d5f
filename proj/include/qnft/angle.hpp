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

#include <string>
#include <string_view>

#include <json.hpp>

namespace qnft {

/// Parses "pi", "-pi/2", "3pi/16", "3*pi/16", "0.25" or a bare number.
/// Throws ParameterError on anything else.
double parse_angle(std::string_view text);

/// Accepts a JSON number or a string understood by parse_angle.
double angle_from_json(const nlohmann::json& value);

}  // namespace qnft
