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

#ifndef STRATVOTE_MODEL_H_
#define STRATVOTE_MODEL_H_

// Domain types for binary-decision voting games with state-contingent
// preferences.
//
// States are indexed 0..T-1 in increasing order of how much alternative A is
// preferred; signals are indexed 0..M-1 the same way. A binary game is the
// T = 2, M = 2 special case with state 0 = L, state 1 = H, signal 0 = l and
// signal 1 = h.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "stratvote/error.h"

namespace stratvote {

// Absolute tolerance for stochastic-vector checks and knife-edge tests.
inline constexpr double kStochasticTolerance = 1e-12;

inline constexpr int kStateL = 0;
inline constexpr int kStateH = 1;
inline constexpr int kSignalLow = 0;
inline constexpr int kSignalHigh = 1;

enum class Setting { kBinary, kNonBinary };
enum class Alternative { kAccept, kReject };
enum class AgentTag { kFriendly, kUnfriendly, kContingent };

std::string SettingName(Setting setting);
std::string AlternativeName(Alternative alt);
std::string AgentTagName(AgentTag tag);

struct StatePrior {
  std::vector<double> probs;

  int num_states() const { return static_cast<int>(probs.size()); }
  double operator[](int state) const { return probs[state]; }
  bool operator==(const StatePrior&) const = default;
};

// rows[state][signal] = Pr[signal | state].
struct SignalChannel {
  std::vector<std::vector<double>> rows;

  int num_states() const { return static_cast<int>(rows.size()); }
  int num_signals() const {
    return rows.empty() ? 0 : static_cast<int>(rows.front().size());
  }
  double prob(int state, int signal) const { return rows[state][signal]; }
  // Pr[signal >= first_signal | state].
  double TailProb(int state, int first_signal) const;
  bool operator==(const SignalChannel&) const = default;
};

// values[state] = {u(state, A), u(state, R)}.
struct UtilityFn {
  std::vector<std::array<int, 2>> values;

  int accept(int state) const { return values[state][0]; }
  int reject(int state) const { return values[state][1]; }
  bool PrefersAccept(int state) const { return accept(state) > reject(state); }
  int MaxValue() const;
  bool operator==(const UtilityFn&) const = default;
};

// Thresholds use the 1-based state numbering: low_threshold is the largest
// state (1..T) in which the agent prefers R, or 0 if there is none;
// high_threshold = low_threshold + 1.
struct AgentType {
  AgentTag tag = AgentTag::kContingent;
  int low_threshold = 0;
  int high_threshold = 1;
};

// vote_probs[m] = probability of voting A on signal m.
struct Strategy {
  std::vector<double> vote_probs;

  int num_signals() const { return static_cast<int>(vote_probs.size()); }
  double operator[](int signal) const { return vote_probs[signal]; }
  bool operator==(const Strategy&) const = default;

  static Strategy Constant(int num_signals, double beta);
  // Votes A exactly on the upper half of the signals; (0, 1) when binary.
  static Strategy Informative(int num_signals);
  // beta_low on signals below `split`, beta_high on the rest.
  static Strategy TwoLevel(int num_signals, int split, double beta_low,
                           double beta_high);
};

struct Profile {
  std::vector<Strategy> strategies;

  int size() const { return static_cast<int>(strategies.size()); }
  const Strategy& operator[](int agent) const { return strategies[agent]; }
  Strategy& operator[](int agent) { return strategies[agent]; }
  bool operator==(const Profile&) const = default;
};

struct UtilityGroup {
  UtilityFn utility;
  double fraction = 0.0;
  bool operator==(const UtilityGroup&) const = default;
};

// Unvalidated instance exactly as ingested. Exactly one of `groups` and
// `agents` is populated.
struct RawInstance {
  Setting setting = Setting::kBinary;
  int n = 0;
  double mu = 0.5;
  StatePrior prior;
  SignalChannel channel;
  std::vector<UtilityGroup> groups;
  std::vector<UtilityFn> agents;
  bool operator==(const RawInstance&) const = default;
};

struct TypeFractions {
  double friendly = 0.0;
  double unfriendly = 0.0;
  double contingent = 0.0;
};

// floor(x) that absorbs representation error in products such as 0.3 * 20.
int FloorCount(double x);

class Instance;

// Parameters shared by every instance of a sequence: everything but N. Only
// group-specified games form a family, since explicit agent lists are tied to
// one N.
class Family {
 public:
  // Validates every N-independent assumption; throws Error.
  static Family Create(Setting setting, double mu, StatePrior prior,
                       SignalChannel channel, std::vector<UtilityGroup> groups);

  // Expands groups into N agents with the setting's rounding rule and
  // validates the result.
  Instance Materialize(int n) const;

  Setting setting() const { return setting_; }
  double mu() const { return mu_; }
  const StatePrior& prior() const { return prior_; }
  const SignalChannel& channel() const { return channel_; }
  const std::vector<UtilityGroup>& groups() const { return groups_; }
  const std::vector<AgentType>& group_types() const { return group_types_; }
  int num_states() const { return prior_.num_states(); }
  int num_signals() const { return channel_.num_signals(); }
  // alpha^A per state.
  const std::vector<double>& accept_fractions() const {
    return accept_fractions_;
  }
  TypeFractions type_fractions() const { return fractions_; }
  Alternative InformedMajority(int state) const;
  // 0-based indices of L (largest R-majority state) and H = L + 1.
  int low_boundary() const { return low_boundary_; }
  int high_boundary() const { return low_boundary_ + 1; }
  int utility_bound() const;

  // Agent counts (friendly, unfriendly, contingent) for a given N.
  std::array<int, 3> TypeCounts(int n) const;

 private:
  Family() = default;

  Setting setting_ = Setting::kBinary;
  double mu_ = 0.5;
  StatePrior prior_;
  SignalChannel channel_;
  std::vector<UtilityGroup> groups_;
  std::vector<AgentType> group_types_;
  std::vector<double> accept_fractions_;
  TypeFractions fractions_;
  int low_boundary_ = 0;
};

// A validated game with N materialized agents. Immutable.
class Instance {
 public:
  const RawInstance& raw() const { return raw_; }
  Setting setting() const { return raw_.setting; }
  int n() const { return static_cast<int>(agents_.size()); }
  double mu() const { return raw_.mu; }
  const StatePrior& prior() const { return raw_.prior; }
  const SignalChannel& channel() const { return raw_.channel; }
  int num_states() const { return raw_.prior.num_states(); }
  int num_signals() const { return raw_.channel.num_signals(); }

  const std::vector<UtilityFn>& agents() const { return agents_; }
  const std::vector<AgentType>& agent_types() const { return agent_types_; }
  const std::optional<Family>& family() const { return family_; }

  // A wins iff at least this many agents vote A: ceil(mu * N).
  int winning_count() const { return winning_count_; }
  const std::vector<double>& accept_fractions() const {
    return accept_fractions_;
  }
  Alternative InformedMajority(int state) const;
  int low_boundary() const { return low_boundary_; }
  int high_boundary() const { return low_boundary_ + 1; }

  // Family fractions for group-specified games, realized N_x / N otherwise.
  TypeFractions type_fractions() const;
  TypeFractions realized_fractions() const;
  int CountOf(AgentTag tag) const;
  std::vector<int> AgentsOf(AgentTag tag) const;
  // B: the largest utility value of any agent.
  int utility_bound() const { return utility_bound_; }

 private:
  friend Instance ValidateInstance(const RawInstance& raw);
  friend class Family;
  Instance() = default;

  RawInstance raw_;
  std::vector<UtilityFn> agents_;
  std::vector<AgentType> agent_types_;
  std::optional<Family> family_;
  int winning_count_ = 0;
  std::vector<double> accept_fractions_;
  int low_boundary_ = 0;
  int utility_bound_ = 0;
};

// Returns the validated instance or throws Error with the first violated
// assumption.
Instance ValidateInstance(const RawInstance& raw);
inline Instance ValidateInstance(const Instance& instance) {
  return ValidateInstance(instance.raw());
}

AgentType ClassifyAgent(const UtilityFn& utility, const Instance& instance);
Alternative InformedMajority(const Instance& instance, int state);

// ceil(mu * n) with the same representation-error guard as FloorCount.
int WinningCount(double mu, int n);

// Regular profile: friendly agents always vote A, unfriendly agents always
// vote R, contingent agents play `contingent`.
Profile RegularProfile(const Instance& instance, const Strategy& contingent);
Profile SymmetricProfile(const Instance& instance, const Strategy& strategy);
bool IsRegular(const Profile& profile, const Instance& instance);

}  // namespace stratvote

#endif  // STRATVOTE_MODEL_H_
