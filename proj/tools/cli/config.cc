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


#include "cli/config.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace fleetreloc::cli {
namespace {

// Defaults in file syntax, one entry per known key.
const char* const kDefaults = R"(
[run]
seed = 1
out_dir = "out"
workers = 1
time_limit_ms = 5000
node_limit = 200
epoch_csv = false

[scenario]
source = "synthetic"
instances = 10
files = []
zones = 10
grid_cols = 5
spacing_m = 1000.0
jitter_m = 150.0
speed_mps = 8.0
fleet = 100
hot_zones = 3
epochs = 24
hot_riders_per_epoch = 15.0
background_riders_per_epoch = 10.0
background_to_hot = 0.6
layout_seed = 1

[sim]
tick_seconds = 30.0
ticks_per_epoch = 10
relocation_period_ticks = 10
max_wait_epochs = 3
pooling_ratio = 1.5
forecast_sigma_pct = 2.5

[weights]
qp_base = 0.5
qp_decay = 0.75
qr_scale = 0.001
qr_base = 0.5
big_m = 0

[policies]
list = ["dispatcher", "mpc2", "mpc6"]
model = ""

[harvest]
horizon = 6
perturbations = 2
perturb_sigma_pct = 2.5
output = "pairs.jsonl"

[train]
dataset = ""
hidden = [64, 64]
batch_size = 32
learning_rate = 0.001
l1 = 0.00001
epochs = 100
kappa = 4.0
mu = 3
tail_weight = 5.0
zero_fraction_threshold = 0.9
standardize_inputs = true
split_ratio = 5
model = "model.json"
)";

std::string Trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Drops a trailing comment outside quotes.
std::string StripComment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool IsQuoted(const std::string& v) {
  return v.size() >= 2 && v.front() == '"' && v.back() == '"';
}

bool IsNumber(const std::string& v) {
  if (v.empty()) return false;
  double d = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  return ec == std::errc() && ptr == v.data() + v.size();
}

bool IsScalar(const std::string& v) {
  return IsQuoted(v) || IsNumber(v) || v == "true" || v == "false";
}

std::vector<std::string> SplitArray(const std::string& v, const std::string& key) {
  std::vector<std::string> items;
  const std::string body = Trim(v.substr(1, v.size() - 2));
  if (body.empty()) return items;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(Trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  items.push_back(Trim(cur));
  for (const std::string& item : items)
    if (!IsScalar(item)) throw UsageError(key + ": bad array element '" + item + "'");
  return items;
}

void CheckLiteral(const std::string& key, const std::string& v) {
  if (IsScalar(v)) return;
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') {
    SplitArray(v, key);
    return;
  }
  throw UsageError(key + ": cannot parse value '" + v + "'");
}

std::string Unquote(const std::string& v) { return IsQuoted(v) ? v.substr(1, v.size() - 2) : v; }

nlohmann::json ScalarToJson(const std::string& v) {
  if (IsQuoted(v)) return Unquote(v);
  if (v == "true" || v == "false") return v == "true";
  long i = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
  if (ec == std::errc() && ptr == v.data() + v.size()) return i;
  return std::stod(v);
}

nlohmann::json LiteralToJson(const std::string& key, const std::string& v) {
  if (IsScalar(v)) return ScalarToJson(v);
  nlohmann::json out = nlohmann::json::array();
  for (const std::string& item : SplitArray(v, key)) out.push_back(ScalarToJson(item));
  return out;
}

}  // namespace

Config Config::Defaults() {
  Config c;
  std::istringstream in(kDefaults);
  std::string section;
  for (std::string line; std::getline(in, line);) {
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const std::size_t eq = line.find('=');
    c.values_[section + "." + Trim(line.substr(0, eq))] = Trim(line.substr(eq + 1));
  }
  return c;
}

void Config::Merge(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string section;
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const std::string line = Trim(StripComment(raw));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw UsageError(where + "unterminated section header");
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(where + "expected key = value");
    const std::string name = Trim(line.substr(0, eq));
    const std::string key = section.empty() ? name : section + "." + name;
    if (!Has(key)) throw UsageError(where + "unknown key " + key);
    const std::string value = Trim(line.substr(eq + 1));
    try {
      CheckLiteral(key, value);
    } catch (const UsageError& e) {
      throw UsageError(where + e.what());
    }
    values_[key] = value;
  }
}

void Config::MergeFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Merge(buf.str(), path.string());
}

void Config::Set(const std::string& key, const std::string& value) {
  if (!Has(key)) throw UsageError("unknown key " + key);
  std::string v = Trim(value);
  const bool structured = IsScalar(v) || (!v.empty() && v.front() == '[');
  if (!structured) v = "\"" + v + "\"";
  CheckLiteral(key, v);
  values_[key] = v;
}

const std::string& Config::Raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("unknown key " + key);
  return it->second;
}

std::string Config::GetString(const std::string& key) const {
  const std::string& v = Raw(key);
  if (!IsQuoted(v)) throw UsageError(key + ": expected a string, got " + v);
  return Unquote(v);
}

long Config::GetInt(const std::string& key) const {
  const std::string& v = Raw(key);
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw UsageError(key + ": expected an integer, got " + v);
  return out;
}

double Config::GetDouble(const std::string& key) const {
  const std::string& v = Raw(key);
  if (!IsNumber(v)) throw UsageError(key + ": expected a number, got " + v);
  return std::stod(v);
}

bool Config::GetBool(const std::string& key) const {
  const std::string& v = Raw(key);
  if (v != "true" && v != "false") throw UsageError(key + ": expected true or false, got " + v);
  return v == "true";
}

std::vector<std::string> Config::GetStringList(const std::string& key) const {
  const std::string& v = Raw(key);
  if (v.empty() || v.front() != '[') throw UsageError(key + ": expected an array, got " + v);
  std::vector<std::string> out;
  for (const std::string& item : SplitArray(v, key)) {
    if (!IsQuoted(item)) throw UsageError(key + ": expected strings, got " + item);
    out.push_back(Unquote(item));
  }
  return out;
}

std::vector<long> Config::GetIntList(const std::string& key) const {
  const std::string& v = Raw(key);
  if (v.empty() || v.front() != '[') throw UsageError(key + ": expected an array, got " + v);
  std::vector<long> out;
  for (const std::string& item : SplitArray(v, key)) {
    long x = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw UsageError(key + ": expected integers, got " + item);
    out.push_back(x);
  }
  return out;
}

std::string Config::ToToml(const std::set<std::string>& omit) const {
  std::ostringstream out;
  std::string section;
  for (const auto& [key, value] : values_) {
    if (omit.count(key)) continue;
    const std::size_t dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    out << key.substr(dot + 1) << " = " << value << '\n';
  }
  return out.str();
}

nlohmann::json Config::ToJson(const std::set<std::string>& omit) const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : values_) {
    if (omit.count(key)) continue;
    out[key] = LiteralToJson(key, value);
  }
  return out;
}

}  // namespace fleetreloc::cli
