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

#include "stratvote/model.h"

#include <random>

#include "doctest.h"
#include "random_games.h"
#include "stratvote/reference_games.h"

namespace stratvote {
namespace {

RawInstance PolicyRaw() {
  RawInstance raw;
  raw.setting = Setting::kBinary;
  raw.n = 20;
  raw.mu = 0.6;
  raw.prior = StatePrior{{0.6, 0.4}};
  raw.channel = SignalChannel{{{0.4, 0.6}, {0.2, 0.8}}};
  raw.groups = {{UtilityFn{{{{6, 4}}, {{8, 2}}}}, 0.2},
                {UtilityFn{{{{1, 8}}, {{3, 5}}}}, 0.3},
                {UtilityFn{{{{2, 8}}, {{3, 1}}}}, 0.5}};
  return raw;
}

ErrorCode CodeOf(const RawInstance& raw) {
  try {
    ValidateInstance(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validation to fail");
  return ErrorCode::kUsage;
}

TEST_CASE("policy game validates with 4/6/10 agents") {
  const Instance inst = ValidateInstance(PolicyRaw());
  CHECK(inst.n() == 20);
  CHECK(inst.CountOf(AgentTag::kFriendly) == 4);
  CHECK(inst.CountOf(AgentTag::kUnfriendly) == 6);
  CHECK(inst.CountOf(AgentTag::kContingent) == 10);
  CHECK(inst.winning_count() == 12);
  CHECK(inst.InformedMajority(kStateH) == Alternative::kAccept);
  CHECK(inst.InformedMajority(kStateL) == Alternative::kReject);
  CHECK(InformedMajority(inst, kStateL) == Alternative::kReject);
  CHECK(inst.utility_bound() == 8);
}

TEST_CASE("uninformative channel is rejected") {
  RawInstance raw = PolicyRaw();
  raw.channel = SignalChannel{{{0.5, 0.5}, {0.5, 0.5}}};
  CHECK(CodeOf(raw) == ErrorCode::kNoPositiveCorrelation);
}

TEST_CASE("validation reports the first violated assumption") {
  RawInstance raw = PolicyRaw();
  raw.prior = StatePrior{{1.0, 0.0}};
  raw.channel = SignalChannel{{{0.5, 0.5}, {0.5, 0.5}}};
  CHECK(CodeOf(raw) == ErrorCode::kNonPositivePrior);

  raw = PolicyRaw();
  raw.prior = StatePrior{{0.6, 0.5}};
  CHECK(CodeOf(raw) == ErrorCode::kRowNotStochastic);

  raw = PolicyRaw();
  raw.channel.rows[1] = {0.2, 0.7};
  CHECK(CodeOf(raw) == ErrorCode::kRowNotStochastic);

  raw = PolicyRaw();
  raw.groups[0].utility = UtilityFn{{{{8, 4}}, {{6, 2}}}};
  CHECK(CodeOf(raw) == ErrorCode::kUtilityNotMonotone);

  raw = PolicyRaw();
  raw.groups[0].utility = UtilityFn{{{{4, 4}}, {{8, 2}}}};
  CHECK(CodeOf(raw) == ErrorCode::kUtilityNotMonotone);

  // Everyone prefers A in both states.
  raw = PolicyRaw();
  for (auto& g : raw.groups) g.utility = UtilityFn{{{{6, 4}}, {{8, 2}}}};
  CHECK(CodeOf(raw) == ErrorCode::kDegenerateMajority);

  // alpha^A_H = 0.7 equals mu.
  raw = PolicyRaw();
  raw.mu = 0.7;
  CHECK(CodeOf(raw) == ErrorCode::kKnifeEdgeThreshold);

  raw = PolicyRaw();
  raw.mu = 0;
  CHECK(CodeOf(raw) == ErrorCode::kMalformed);
}

TEST_CASE("rounding that flips the informed majority is rejected") {
  // alpha^A = 0.44 and 0.49 in states 1 and 2, below mu = 0.5. At N = 10 the
  // friendly total rounds up to 5 and all of it lands in the always-A group,
  // so 5 >= ceil(0.5 * 10) agents would prefer A in state 1.
  RawInstance raw;
  raw.setting = Setting::kNonBinary;
  raw.n = 10;
  raw.mu = 0.5;
  raw.prior = StatePrior{{0.3, 0.3, 0.4}};
  raw.channel = ThreeStateFamily().channel();
  raw.groups = {{UtilityFn{{{{1, 5}}, {{4, 3}}, {{6, 1}}}}, 0.05},
                {UtilityFn{{{{4, 3}}, {{6, 2}}, {{9, 1}}}}, 0.44},
                {UtilityFn{{{{2, 6}}, {{3, 4}}, {{4, 2}}}}, 0.3},
                {UtilityFn{{{{1, 8}}, {{2, 6}}, {{3, 4}}}}, 0.21}};
  CHECK(CodeOf(raw) == ErrorCode::kRoundingFlipsMajority);
  raw.n = 100;
  CHECK_NOTHROW(ValidateInstance(raw));
}

TEST_CASE("nonstochastic-dominance channel is rejected") {
  const Family f = ThreeStateFamily();
  RawInstance raw = f.Materialize(20).raw();
  raw.channel.rows[1] = {0.1, 0.2, 0.3, 0.4};
  CHECK(CodeOf(raw) == ErrorCode::kNoStochasticDominance);
}

TEST_CASE("three-state game classification") {
  const Family f = ThreeStateFamily();
  const Instance inst = f.Materialize(20);
  CHECK(inst.InformedMajority(0) == Alternative::kReject);
  CHECK(inst.InformedMajority(1) == Alternative::kReject);
  CHECK(inst.InformedMajority(2) == Alternative::kAccept);
  CHECK(f.low_boundary() == 1);
  CHECK(f.group_types()[0].tag == AgentTag::kUnfriendly);
  CHECK(f.group_types()[1].tag == AgentTag::kContingent);
  CHECK(f.group_types()[2].tag == AgentTag::kFriendly);
  CHECK(f.group_types()[3].tag == AgentTag::kFriendly);
  CHECK(f.group_types()[3].low_threshold == 0);
  CHECK(f.group_types()[1].low_threshold == 2);
  CHECK(f.group_types()[1].high_threshold == 3);
  CHECK(inst.CountOf(AgentTag::kFriendly) == 10);
  CHECK(inst.CountOf(AgentTag::kUnfriendly) == 5);
  CHECK(inst.CountOf(AgentTag::kContingent) == 5);
  CHECK(inst.winning_count() == 12);
}

TEST_CASE("agent classification") {
  const Instance inst = PolicyFamily().Materialize(20);
  const AgentType f = ClassifyAgent(UtilityFn{{{{6, 4}}, {{8, 2}}}}, inst);
  CHECK(f.tag == AgentTag::kFriendly);
  CHECK(f.low_threshold == 0);
  CHECK(f.high_threshold == 1);
  CHECK(ClassifyAgent(UtilityFn{{{{1, 8}}, {{3, 5}}}}, inst).tag ==
        AgentTag::kUnfriendly);
  const AgentType c = ClassifyAgent(UtilityFn{{{{2, 8}}, {{3, 1}}}}, inst);
  CHECK(c.tag == AgentTag::kContingent);
  CHECK(c.low_threshold == 1);
}

TEST_CASE("binary rounding floors friendly and unfriendly counts") {
  const Family f = PolicyFamily();
  for (int n : {7, 13, 20, 33, 101}) {
    const auto counts = f.TypeCounts(n);
    CHECK(counts[0] == static_cast<int>(0.2 * n + 1e-9));
    CHECK(counts[1] == static_cast<int>(0.3 * n + 1e-9));
    CHECK(counts[0] + counts[1] + counts[2] == n);
  }
}

TEST_CASE("non-binary rounding rounds friendly count up") {
  const Family f = Family::Create(
      Setting::kNonBinary, 0.6, StatePrior{{0.3, 0.3, 0.4}},
      ThreeStateFamily().channel(),
      {{UtilityFn{{{{1, 8}}, {{2, 6}}, {{3, 4}}}}, 0.3},
       {UtilityFn{{{{2, 6}}, {{3, 4}}, {{4, 2}}}}, 0.35},
       {UtilityFn{{{{2, 4}}, {{5, 3}}, {{8, 2}}}}, 0.35}});
  // alpha_F = 0.35: N_F = N - floor(0.65 N).
  const auto counts = f.TypeCounts(21);
  CHECK(counts[0] == 21 - 13);
  CHECK(counts[1] == 6);
  CHECK(counts[2] == 7);
  const Instance inst = f.Materialize(21);
  CHECK(inst.CountOf(AgentTag::kFriendly) == 8);
}

TEST_CASE("group expansion is in input order") {
  const Instance inst = PolicyFamily().Materialize(20);
  for (int i = 0; i < 4; ++i) CHECK(inst.agent_types()[i].tag == AgentTag::kFriendly);
  for (int i = 4; i < 10; ++i) {
    CHECK(inst.agent_types()[i].tag == AgentTag::kUnfriendly);
  }
  for (int i = 10; i < 20; ++i) {
    CHECK(inst.agent_types()[i].tag == AgentTag::kContingent);
  }
}

TEST_CASE("several groups of one type split the type total") {
  const Family f = Family::Create(
      Setting::kBinary, 0.6, StatePrior{{0.6, 0.4}},
      SignalChannel{{{0.4, 0.6}, {0.2, 0.8}}},
      {{UtilityFn{{{{6, 4}}, {{8, 2}}}}, 0.2},
       {UtilityFn{{{{2, 8}}, {{3, 1}}}}, 0.25},
       {UtilityFn{{{{1, 8}}, {{3, 5}}}}, 0.3},
       {UtilityFn{{{{0, 9}}, {{5, 1}}}}, 0.25}});
  const Instance inst = f.Materialize(10);
  // Contingent total 10 - 2 - 3 = 5: first contingent group floor(2.5) = 2,
  // last one the remaining 3.
  CHECK(inst.CountOf(AgentTag::kContingent) == 5);
  CHECK(inst.agents()[2] == UtilityFn{{{{2, 8}}, {{3, 1}}}});
  CHECK(inst.agents()[3] == UtilityFn{{{{2, 8}}, {{3, 1}}}});
  CHECK(inst.agents()[7] == UtilityFn{{{{0, 9}}, {{5, 1}}}});
  CHECK(inst.agents()[9] == UtilityFn{{{{0, 9}}, {{5, 1}}}});
}

TEST_CASE("explicit agent list") {
  RawInstance raw = PolicyRaw();
  raw.groups.clear();
  raw.n = 5;
  raw.agents = {UtilityFn{{{{6, 4}}, {{8, 2}}}}, UtilityFn{{{{2, 8}}, {{3, 1}}}},
                UtilityFn{{{{2, 8}}, {{3, 1}}}}, UtilityFn{{{{2, 8}}, {{3, 1}}}},
                UtilityFn{{{{1, 8}}, {{3, 5}}}}};
  const Instance inst = ValidateInstance(raw);
  CHECK(!inst.family().has_value());
  CHECK(inst.accept_fractions()[kStateH] == doctest::Approx(0.8));
  CHECK(inst.type_fractions().contingent == doctest::Approx(0.6));
  raw.n = 6;
  CHECK(CodeOf(raw) == ErrorCode::kMalformed);
}

TEST_CASE("re-validation is idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Family f = testing::RandomBinaryFamily(rng);
    const int n = testing::SmallInt(rng, 20, 80);
    const auto inst = testing::MaterializeAll(f, {n});
    if (!inst) continue;
    const Instance again = ValidateInstance(inst->front());
    CHECK(again.raw() == inst->front().raw());
    CHECK(again.agents() == inst->front().agents());
    CHECK(again.winning_count() == inst->front().winning_count());
  }
}

TEST_CASE("friendly and unfriendly shares stay below the thresholds") {
  const Family f = ThreeStateFamily();
  for (int n = 20; n <= 400; n += 20) {
    const Instance inst = f.Materialize(n);
    CHECK(inst.CountOf(AgentTag::kFriendly) < 0.6 * n);
    CHECK(inst.CountOf(AgentTag::kUnfriendly) < 0.4 * n);
  }
}

TEST_CASE("regular profiles") {
  const Instance inst = PolicyFamily().Materialize(20);
  const Profile p = RegularProfile(inst, Strategy::Informative(2));
  CHECK(IsRegular(p, inst));
  CHECK(p[0] == Strategy::Constant(2, 1.0));
  CHECK(p[5] == Strategy::Constant(2, 0.0));
  CHECK(p[15] == Strategy{{0.0, 1.0}});
  CHECK_FALSE(IsRegular(SymmetricProfile(inst, Strategy::Informative(2)), inst));
  CHECK(Strategy::Informative(4) == Strategy{{0.0, 0.0, 1.0, 1.0}});
}

TEST_CASE("winner threshold") {
  CHECK(WinningCount(0.5, 5) == 3);
  CHECK(WinningCount(0.5, 4) == 2);
  CHECK(WinningCount(0.6, 20) == 12);
  CHECK(WinningCount(0.6, 500) == 300);
  CHECK(WinningCount(0.5, 2 * 7 + 3) == 7 + 2);
}

}  // namespace
}  // namespace stratvote
