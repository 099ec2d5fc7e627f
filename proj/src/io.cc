// Copyright 2026 The Stratvote Authors
//
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

#include "stratvote/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stratvote {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParseError, "field '" + field + "': " + what);
}

const json& Require(const json& doc, const std::string& key) {
  if (!doc.is_object()) Fail(key, "document is not an object");
  auto it = doc.find(key);
  if (it == doc.end()) Fail(key, "missing");
  return *it;
}

double Number(const json& v, const std::string& field) {
  if (!v.is_number()) Fail(field, "expected a number");
  return v.get<double>();
}

int Integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) Fail(field, "expected an integer");
  return v.get<int>();
}

std::vector<double> NumberList(const json& v, const std::string& field) {
  if (!v.is_array()) Fail(field, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(Number(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

UtilityFn ParseUtility(const json& v, const std::string& field) {
  if (!v.is_array()) Fail(field, "expected [[uA, uR], ...]");
  UtilityFn u;
  for (std::size_t s = 0; s < v.size(); ++s) {
    const std::string f = field + "[" + std::to_string(s) + "]";
    if (!v[s].is_array() || v[s].size() != 2) Fail(f, "expected [uA, uR]");
    u.values.push_back({Integer(v[s][0], f + "[0]"), Integer(v[s][1], f + "[1]")});
  }
  return u;
}

json UtilityToJson(const UtilityFn& u) {
  json out = json::array();
  for (const auto& v : u.values) out.push_back({v[0], v[1]});
  return out;
}

// nlohmann reports a byte offset; turn it into a line number.
int LineOf(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

RawInstance ParseRawInstance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(LineOf(text, e.byte)) + ": " +
                    e.what());
  }
  return ParseRawInstance(doc);
}

RawInstance ParseRawInstance(const json& doc) {
  RawInstance raw;
  const json& setting = Require(doc, "setting");
  if (setting == "binary") {
    raw.setting = Setting::kBinary;
  } else if (setting == "nonbinary") {
    raw.setting = Setting::kNonBinary;
  } else {
    Fail("setting", "expected \"binary\" or \"nonbinary\"");
  }
  raw.n = Integer(Require(doc, "n"), "n");
  if (raw.n < 1) Fail("n", "must be positive");
  raw.mu = Number(Require(doc, "mu"), "mu");
  raw.prior.probs = NumberList(Require(doc, "prior"), "prior");
  const json& matrix = Require(doc, "signal_matrix");
  if (!matrix.is_array()) Fail("signal_matrix", "expected an array of rows");
  for (std::size_t s = 0; s < matrix.size(); ++s) {
    raw.channel.rows.push_back(
        NumberList(matrix[s], "signal_matrix[" + std::to_string(s) + "]"));
  }

  const bool has_groups = doc.contains("groups");
  const bool has_agents = doc.contains("agents");
  if (has_groups == has_agents) {
    Fail("groups", "exactly one of 'groups' and 'agents' is required");
  }
  if (has_groups) {
    const json& groups = doc["groups"];
    if (!groups.is_array() || groups.empty()) {
      Fail("groups", "expected a non-empty array");
    }
    double total = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::string f = "groups[" + std::to_string(g) + "]";
      UtilityGroup group;
      group.utility = ParseUtility(Require(groups[g], "utility"), f + ".utility");
      group.fraction = Number(Require(groups[g], "fraction"), f + ".fraction");
      total += group.fraction;
      raw.groups.push_back(std::move(group));
    }
    if (std::abs(total - 1.0) > 1e-9) {
      Fail("groups", "fractions sum to " + std::to_string(total) + ", not 1");
    }
  } else {
    const json& agents = doc["agents"];
    if (!agents.is_array() || agents.empty()) {
      Fail("agents", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
      raw.agents.push_back(
          ParseUtility(agents[i], "agents[" + std::to_string(i) + "]"));
    }
  }
  return raw;
}

json RawInstanceToJson(const RawInstance& raw) {
  json doc;
  doc["setting"] = SettingName(raw.setting);
  doc["n"] = raw.n;
  doc["mu"] = raw.mu;
  doc["prior"] = raw.prior.probs;
  doc["signal_matrix"] = raw.channel.rows;
  if (!raw.groups.empty()) {
    json groups = json::array();
    for (const auto& g : raw.groups) {
      groups.push_back({{"utility", UtilityToJson(g.utility)},
                        {"fraction", g.fraction}});
    }
    doc["groups"] = std::move(groups);
  } else {
    json agents = json::array();
    for (const auto& u : raw.agents) agents.push_back(UtilityToJson(u));
    doc["agents"] = std::move(agents);
  }
  return doc;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteOutput(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUsage, "cannot write " + path);
  out << content;
}

Instance LoadInstance(const std::string& path) {
  return ValidateInstance(ParseRawInstance(ReadFile(path)));
}

Strategy ParseStrategy(const std::string& text) {
  Strategy s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const char* begin = item.data();
    const char* end = item.data() + item.size();
    while (begin < end && *begin == ' ') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kUsage, "bad strategy entry '" + item + "'");
    }
    s.vote_probs.push_back(v);
  }
  if (s.vote_probs.empty()) throw Error(ErrorCode::kUsage, "empty strategy");
  return s;
}

std::vector<int> ParseNs(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
      throw Error(ErrorCode::kUsage, "bad N '" + s + "' in --ns");
    }
    return v;
  };
  std::vector<int> ns;
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const auto colon = text.find(':', range);
    const int a = to_int(text.substr(0, range));
    const int b = to_int(text.substr(
        range + 2, colon == std::string::npos ? std::string::npos
                                              : colon - range - 2));
    const int step =
        colon == std::string::npos ? 1 : to_int(text.substr(colon + 1));
    for (int n = a; n <= b; n += step) ns.push_back(n);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) ns.push_back(to_int(item));
    }
  }
  if (ns.empty()) throw Error(ErrorCode::kUsage, "--ns is empty");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) {
      throw Error(ErrorCode::kUsage, "--ns must be strictly ascending");
    }
  }
  return ns;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  if (ec != std::errc()) return "NA";
  return std::string(buf, ptr);
}

}  // namespace stratvote
