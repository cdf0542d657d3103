// Copyright 2026 The sir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sir/common/error.hpp"

namespace sir::toml {

using Json = nlohmann::ordered_json;

/// A parsed TOML document. Tables become objects, arrays of tables become
/// arrays of objects. Every key is recorded with its source line under its
/// JSON pointer (e.g. "/pus/1/level_priors").
struct Document {
  Json root = Json::object();
  std::string source;
  std::map<std::string, int> lines;

  /// Line of the key at `pointer`, falling back to its closest recorded parent; 0 if none.
  int line_of(const std::string& pointer) const;
  /// "source:line: message".
  std::string where(const std::string& pointer, const std::string& message) const;
};

/// Subset of TOML v1.0: comments, bare/quoted/dotted keys, basic and literal
/// strings, integers, floats (including inf/nan), booleans, arrays (multi-line,
/// trailing comma), inline tables, [table] and [[array of tables]] headers.
/// Dates and multi-line strings are rejected. Errors throw ValidationError
/// with a "source:line:" prefix.
Document parse(std::string_view text, const std::string& source = "<toml>");
Document parse_file(const std::string& path);

/// Serializes an object: plain keys first, then nested tables, then arrays of tables.
std::string dump(const Json& root);

}  // namespace sir::toml
