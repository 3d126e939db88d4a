// Copyright 2026 The fleetreloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Experiment configuration: a TOML-style file of `key = value` lines under
// `[section]` headers, overlaid by command-line overrides. Values are
// integers, reals, booleans, quoted strings or flat arrays of those.

#ifndef FLEETRELOC_TOOLS_CLI_CONFIG_H_
#define FLEETRELOC_TOOLS_CLI_CONFIG_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fleetreloc/domain.h"

namespace fleetreloc::cli {

// Bad flags, bad config keys or values. The message names the field.
class UsageError : public Error {
 public:
  using Error::Error;
};

class Config {
 public:
  // Every known key with its default.
  static Config Defaults();

  // Parses `text`; `origin` prefixes error messages. Unknown keys throw.
  void Merge(const std::string& text, const std::string& origin);
  void MergeFile(const std::filesystem::path& path);
  // One override, "section.key" = value in file syntax. Bare words are taken
  // as strings.
  void Set(const std::string& key, const std::string& value);

  bool Has(const std::string& key) const { return values_.count(key) > 0; }
  std::string GetString(const std::string& key) const;
  long GetInt(const std::string& key) const;
  double GetDouble(const std::string& key) const;
  bool GetBool(const std::string& key) const;
  std::vector<std::string> GetStringList(const std::string& key) const;
  std::vector<long> GetIntList(const std::string& key) const;

  // Resolved config with keys in sorted order, minus `omit`.
  std::string ToToml(const std::set<std::string>& omit = {}) const;
  nlohmann::json ToJson(const std::set<std::string>& omit = {}) const;

 private:
  const std::string& Raw(const std::string& key) const;
  std::map<std::string, std::string> values_;  // key -> literal text
};

}  // namespace fleetreloc::cli

#endif  // FLEETRELOC_TOOLS_CLI_CONFIG_H_
