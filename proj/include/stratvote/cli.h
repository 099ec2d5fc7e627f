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

#ifndef STRATVOTE_CLI_H_
#define STRATVOTE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace stratvote {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitNumeric = 3;

// Runs the command line. Reports go to --out or `out`; diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);
int RunCli(int argc, char** argv);

struct ReferenceCheck {
  std::string id;
  std::vector<std::string> tags;
  std::string kind;  // "value" or "positive"
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 1e-9;
  bool pass = false;
};

// Every built-in reference value check. `overrides` maps check id to a
// replacement expected value. `only` filters by tag when non-empty.
std::vector<ReferenceCheck> RunReferenceChecks(const nlohmann::json& overrides,
                                       const std::string& only,
                                       double tie_break = 0.3);

}  // namespace stratvote

#endif  // STRATVOTE_CLI_H_
