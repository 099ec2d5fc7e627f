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

#ifndef STRATVOTE_IO_H_
#define STRATVOTE_IO_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "stratvote/model.h"

namespace stratvote {

// Instance document:
// {
//   "setting": "binary" | "nonbinary",
//   "n": 20, "mu": 0.6, "prior": [...], "signal_matrix": [[...], ...],
//   "groups": [{"utility": [[uA, uR], ...], "fraction": 0.2}, ...]
//   -- or --
//   "agents": [[[uA, uR], ...], ...]
// }
// Structural problems throw kParseError naming the field; semantic ones are
// left to ValidateInstance.
RawInstance ParseRawInstance(const std::string& text);
RawInstance ParseRawInstance(const nlohmann::json& doc);
nlohmann::json RawInstanceToJson(const RawInstance& raw);

Instance LoadInstance(const std::string& path);
std::string ReadFile(const std::string& path);
void WriteOutput(const std::string& path, const std::string& content);

// "0.48,0.96" -> Strategy.
Strategy ParseStrategy(const std::string& text);
// "20..500:10" or "20,30,50". Throws kUsage on empty or non-ascending lists.
std::vector<int> ParseNs(const std::string& text);

// 12 significant digits, '.' decimal regardless of locale.
std::string FormatNumber(double value);

}  // namespace stratvote

#endif  // STRATVOTE_IO_H_
