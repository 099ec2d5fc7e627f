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

#ifndef STRATVOTE_REFERENCE_GAMES_H_
#define STRATVOTE_REFERENCE_GAMES_H_

// Reference games used by the golden checks and the tests.

#include "stratvote/model.h"

namespace stratvote {

// Two-state policy game: mu = 0.6, P_H = 0.4, P_hH = 0.8, P_hL = 0.6,
// friendly/unfriendly/contingent fractions 0.2/0.3/0.5.
Family PolicyFamily();

// Same utilities and fractions with P_lL = 0.8 and P_hH = 0.9 (variant 1) or
// P_hH = 0.75 (variant 2).
Family AccuracyFamily(int variant);

// All-contingent game with P_H = 0.5, P_hH = P_lL = 0.8. Utilities per
// variant (state order L, H; pairs {u(A), u(R)}):
//   1: {0, 1}, {1, 0}   2: {1, 2}, {5, 0}   3: {1, 2}, {4, 0}
UtilityFn SincereUtility(int variant);
Family SincereFamily(int variant, double mu);

// Three states, four signals, four equal groups, mu = 0.6.
Family ThreeStateFamily();

}  // namespace stratvote

#endif  // STRATVOTE_REFERENCE_GAMES_H_
