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

#ifndef STRATVOTE_ERROR_H_
#define STRATVOTE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace stratvote {

enum class ErrorCode {
  // Instance validation.
  kMalformed,
  kNonPositivePrior,
  kRowNotStochastic,
  kNoPositiveCorrelation,
  kNoStochasticDominance,
  kUtilityNotMonotone,
  kDegenerateMajority,
  kKnifeEdgeThreshold,
  kRoundingFlipsMajority,
  // Numerics.
  kInstanceTooLarge,
  kNonPositiveExcess,
  kZeroVariance,
  kZeroProbabilitySignal,
  kConstructionInfeasible,
  // Front end.
  kParseError,
  kUsage,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (notably the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stratvote

#endif  // STRATVOTE_ERROR_H_
