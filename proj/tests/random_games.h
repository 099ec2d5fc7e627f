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

#ifndef STRATVOTE_TESTS_RANDOM_GAMES_H_
#define STRATVOTE_TESTS_RANDOM_GAMES_H_

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "stratvote/model.h"

namespace stratvote::testing {

inline double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int SmallInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random binary utility of the requested type (state order L, H).
inline UtilityFn RandomUtility(std::mt19937_64& rng, AgentTag tag) {
  const int a = SmallInt(rng, 0, 3);
  const int b = SmallInt(rng, 0, 3);
  auto step = [&] { return 1 + SmallInt(rng, 0, 3); };
  switch (tag) {
    case AgentTag::kFriendly: {
      const int r_h = a;
      const int r_l = r_h + step();
      const int a_l = r_l + step();
      return UtilityFn{{{{a_l, r_l}}, {{a_l + step(), r_h}}}};
    }
    case AgentTag::kUnfriendly: {
      const int a_l = a;
      const int a_h = a_l + step();
      const int r_h = a_h + step();
      return UtilityFn{{{{a_l, r_h + step()}}, {{a_h, r_h}}}};
    }
    case AgentTag::kContingent:
      break;
  }
  const int top = std::max(a, b);
  return UtilityFn{{{{a, top + step()}}, {{top + step(), b}}}};
}

// A valid binary family with friendly, unfriendly and contingent groups.
inline Family RandomBinaryFamily(std::mt19937_64& rng) {
  for (;;) {
    const double mu = Uniform(rng, 0.2, 0.8);
    const double p_h = Uniform(rng, 0.1, 0.9);
    const double hl = Uniform(rng, 0.05, 0.85);
    const double hh = Uniform(rng, hl + 0.05, 0.98);
    const double af = Uniform(rng, 0.02, mu - 0.03);
    const double au = Uniform(rng, 0.02, 1.0 - mu - 0.03);
    try {
      return Family::Create(
          Setting::kBinary, mu, StatePrior{{1.0 - p_h, p_h}},
          SignalChannel{{{1.0 - hl, hl}, {1.0 - hh, hh}}},
          {{RandomUtility(rng, AgentTag::kFriendly), af},
           {RandomUtility(rng, AgentTag::kUnfriendly), au},
           {RandomUtility(rng, AgentTag::kContingent), 1.0 - af - au}});
    } catch (const Error&) {
      // knife-edge draws; try again
    }
  }
}

// Materializes at every N or returns nullopt if rounding flips the majority.
inline std::optional<std::vector<Instance>> MaterializeAll(
    const Family& family, const std::vector<int>& ns) {
  std::vector<Instance> out;
  for (int n : ns) {
    try {
      out.push_back(family.Materialize(n));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRoundingFlipsMajority) throw;
      return std::nullopt;
    }
  }
  return out;
}

inline Strategy RandomStrategy(std::mt19937_64& rng, int num_signals) {
  Strategy s;
  for (int m = 0; m < num_signals; ++m) {
    const int kind = SmallInt(rng, 0, 5);
    // Mix in exact 0s and 1s so the deterministic-vote path is exercised.
    s.vote_probs.push_back(kind == 0 ? 0.0 : kind == 1 ? 1.0 : Uniform(rng, 0, 1));
  }
  return s;
}

inline Profile RandomProfile(std::mt19937_64& rng, const Instance& instance) {
  Profile p;
  for (int i = 0; i < instance.n(); ++i) {
    p.strategies.push_back(RandomStrategy(rng, instance.num_signals()));
  }
  return p;
}

}  // namespace stratvote::testing

#endif  // STRATVOTE_TESTS_RANDOM_GAMES_H_
