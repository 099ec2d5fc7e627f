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

#include "stratvote/reference_games.h"

namespace stratvote {
namespace {

std::vector<UtilityGroup> PolicyGroups() {
  return {
      {UtilityFn{{{{6, 4}}, {{8, 2}}}}, 0.2},  // friendly
      {UtilityFn{{{{1, 8}}, {{3, 5}}}}, 0.3},  // unfriendly
      {UtilityFn{{{{2, 8}}, {{3, 1}}}}, 0.5},  // contingent
  };
}

}  // namespace

Family PolicyFamily() {
  return Family::Create(Setting::kBinary, 0.6, StatePrior{{0.6, 0.4}},
                        SignalChannel{{{0.4, 0.6}, {0.2, 0.8}}},
                        PolicyGroups());
}

Family AccuracyFamily(int variant) {
  if (variant != 1 && variant != 2) {
    throw Error(ErrorCode::kUsage, "variant must be 1 or 2");
  }
  const std::vector<double> high =
      variant == 1 ? std::vector<double>{0.1, 0.9}
                   : std::vector<double>{0.25, 0.75};
  return Family::Create(Setting::kBinary, 0.6, StatePrior{{0.6, 0.4}},
                        SignalChannel{{{0.8, 0.2}, high}}, PolicyGroups());
}

UtilityFn SincereUtility(int variant) {
  switch (variant) {
    case 1:
      return UtilityFn{{{{0, 1}}, {{1, 0}}}};
    case 2:
      return UtilityFn{{{{1, 2}}, {{5, 0}}}};
    case 3:
      return UtilityFn{{{{1, 2}}, {{4, 0}}}};
  }
  throw Error(ErrorCode::kUsage, "variant must be 1, 2 or 3");
}

Family SincereFamily(int variant, double mu) {
  return Family::Create(Setting::kBinary, mu, StatePrior{{0.5, 0.5}},
                        SignalChannel{{{0.8, 0.2}, {0.2, 0.8}}},
                        {{SincereUtility(variant), 1.0}});
}

Family ThreeStateFamily() {
  return Family::Create(
      Setting::kNonBinary, 0.6, StatePrior{{0.3, 0.3, 0.4}},
      SignalChannel{{{0.6, 0.2, 0.1, 0.1},
                     {0.4, 0.2, 0.2, 0.2},
                     {0.1, 0.2, 0.3, 0.4}}},
      {
          {UtilityFn{{{{1, 8}}, {{2, 6}}, {{3, 4}}}}, 0.25},
          {UtilityFn{{{{2, 6}}, {{3, 4}}, {{4, 2}}}}, 0.25},
          {UtilityFn{{{{2, 4}}, {{5, 3}}, {{8, 2}}}}, 0.25},
          {UtilityFn{{{{4, 3}}, {{6, 2}}, {{9, 1}}}}, 0.25},
      });
}

}  // namespace stratvote
