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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace stratvote {
namespace {

// Guard for floor/ceil of products like alpha * N whose exact value is an
// integer but whose double value lands a few ulps on the wrong side.
constexpr double kRoundingGuard = 1e-9;

std::string StateName(int state) { return "state " + std::to_string(state + 1); }

void ValidateParameters(Setting setting, double mu, const StatePrior& prior,
                        const SignalChannel& channel) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw Error(ErrorCode::kMalformed,
                "threshold mu must lie in (0, 1), got " + std::to_string(mu));
  }
  const int num_states = prior.num_states();
  if (num_states < 2) {
    throw Error(ErrorCode::kMalformed, "at least two world states required");
  }
  if (setting == Setting::kBinary && num_states != 2) {
    throw Error(ErrorCode::kMalformed, "binary setting requires 2 states");
  }
  double total = 0.0;
  for (int s = 0; s < num_states; ++s) {
    if (!(prior[s] > 0.0)) {
      throw Error(ErrorCode::kNonPositivePrior,
                  "prior of " + StateName(s) + " is not positive");
    }
    total += prior[s];
  }
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    throw Error(ErrorCode::kRowNotStochastic, "prior does not sum to 1");
  }

  if (channel.num_states() != num_states) {
    throw Error(ErrorCode::kMalformed,
                "signal matrix needs one row per world state");
  }
  const int num_signals = channel.num_signals();
  if (num_signals < 2) {
    throw Error(ErrorCode::kMalformed, "at least two signals required");
  }
  if (setting == Setting::kBinary && num_signals != 2) {
    throw Error(ErrorCode::kMalformed, "binary setting requires 2 signals");
  }
  for (int s = 0; s < num_states; ++s) {
    const auto& row = channel.rows[s];
    if (static_cast<int>(row.size()) != num_signals) {
      throw Error(ErrorCode::kMalformed, "ragged signal matrix");
    }
    double row_total = 0.0;
    for (double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kRowNotStochastic,
                    "signal probability outside [0, 1] in " + StateName(s));
      }
      row_total += p;
    }
    if (std::abs(row_total - 1.0) > kStochasticTolerance) {
      throw Error(ErrorCode::kRowNotStochastic,
                  "signal row of " + StateName(s) + " does not sum to 1");
    }
  }

  if (setting == Setting::kBinary) {
    const bool high_ok = channel.prob(kStateH, kSignalHigh) >
                         channel.prob(kStateL, kSignalHigh);
    const bool low_ok = channel.prob(kStateH, kSignalLow) <
                        channel.prob(kStateL, kSignalLow);
    if (!high_ok || !low_ok) {
      throw Error(ErrorCode::kNoPositiveCorrelation,
                  "need P_hH > P_hL and P_lH < P_lL");
    }
    return;
  }
  for (int m = 1; m < num_signals; ++m) {
    for (int hi = 1; hi < num_states; ++hi) {
      for (int lo = 0; lo < hi; ++lo) {
        if (!(channel.TailProb(hi, m) > channel.TailProb(lo, m))) {
          throw Error(ErrorCode::kNoStochasticDominance,
                      "Pr[signal >= " + std::to_string(m + 1) + "] is not " +
                          "larger in " + StateName(hi) + " than in " +
                          StateName(lo));
        }
      }
    }
  }
}

void ValidateUtility(const UtilityFn& utility, int num_states) {
  if (static_cast<int>(utility.values.size()) != num_states) {
    throw Error(ErrorCode::kMalformed,
                "utility needs one [uA, uR] pair per world state");
  }
  for (int s = 0; s < num_states; ++s) {
    if (utility.accept(s) < 0 || utility.reject(s) < 0) {
      throw Error(ErrorCode::kMalformed, "utilities must be non-negative");
    }
    if (utility.accept(s) == utility.reject(s)) {
      throw Error(ErrorCode::kUtilityNotMonotone,
                  "u(A) == u(R) in " + StateName(s));
    }
    if (s > 0 && !(utility.accept(s) > utility.accept(s - 1) &&
                   utility.reject(s) < utility.reject(s - 1))) {
      throw Error(ErrorCode::kUtilityNotMonotone,
                  "u(., A) must increase and u(., R) decrease at " +
                      StateName(s));
    }
  }
}

// Checks the informed-majority structure and returns the 0-based index of L.
int ValidateMajority(const std::vector<double>& accept_fractions, double mu) {
  int low_boundary = -1;
  bool any_high = false;
  for (int s = 0; s < static_cast<int>(accept_fractions.size()); ++s) {
    const double alpha = accept_fractions[s];
    if (std::abs(alpha - mu) <= kStochasticTolerance) {
      throw Error(ErrorCode::kKnifeEdgeThreshold,
                  "alpha^A equals mu in " + StateName(s));
    }
    if (alpha < mu) {
      low_boundary = s;
    } else {
      any_high = true;
    }
  }
  if (low_boundary < 0 || !any_high) {
    throw Error(ErrorCode::kDegenerateMajority,
                "informed majority does not depend on the world state");
  }
  return low_boundary;
}

AgentType ClassifyUtility(const UtilityFn& utility, int low_boundary) {
  AgentType type;
  for (int s = 0; s < static_cast<int>(utility.values.size()); ++s) {
    if (!utility.PrefersAccept(s)) type.low_threshold = s + 1;
  }
  type.high_threshold = type.low_threshold + 1;
  const int majority_low = low_boundary + 1;
  if (type.low_threshold < majority_low) {
    type.tag = AgentTag::kFriendly;
  } else if (type.low_threshold > majority_low) {
    type.tag = AgentTag::kUnfriendly;
  } else {
    type.tag = AgentTag::kContingent;
  }
  return type;
}

}  // namespace

std::string SettingName(Setting setting) {
  return setting == Setting::kBinary ? "binary" : "nonbinary";
}

std::string AlternativeName(Alternative alt) {
  return alt == Alternative::kAccept ? "A" : "R";
}

std::string AgentTagName(AgentTag tag) {
  switch (tag) {
    case AgentTag::kFriendly:
      return "friendly";
    case AgentTag::kUnfriendly:
      return "unfriendly";
    case AgentTag::kContingent:
      return "contingent";
  }
  return "unknown";
}

double SignalChannel::TailProb(int state, int first_signal) const {
  double total = 0.0;
  for (int m = first_signal; m < num_signals(); ++m) total += rows[state][m];
  return total;
}

int UtilityFn::MaxValue() const {
  int best = 0;
  for (const auto& v : values) best = std::max({best, v[0], v[1]});
  return best;
}

Strategy Strategy::Constant(int num_signals, double beta) {
  return Strategy{std::vector<double>(num_signals, beta)};
}

Strategy Strategy::Informative(int num_signals) {
  return TwoLevel(num_signals, num_signals / 2, 0.0, 1.0);
}

Strategy Strategy::TwoLevel(int num_signals, int split, double beta_low,
                            double beta_high) {
  Strategy s;
  s.vote_probs.resize(num_signals);
  for (int m = 0; m < num_signals; ++m) {
    s.vote_probs[m] = m < split ? beta_low : beta_high;
  }
  return s;
}

int FloorCount(double x) {
  return static_cast<int>(std::floor(x + kRoundingGuard));
}

int WinningCount(double mu, int n) {
  return static_cast<int>(std::ceil(mu * n - kRoundingGuard));
}

// ---------------------------------------------------------------------------
// Family

Family Family::Create(Setting setting, double mu, StatePrior prior,
                      SignalChannel channel, std::vector<UtilityGroup> groups) {
  ValidateParameters(setting, mu, prior, channel);
  if (groups.empty()) {
    throw Error(ErrorCode::kMalformed, "at least one utility group required");
  }
  const int num_states = prior.num_states();
  double total = 0.0;
  for (const auto& g : groups) {
    if (!(g.fraction > 0.0 && g.fraction <= 1.0)) {
      throw Error(ErrorCode::kMalformed, "group fraction outside (0, 1]");
    }
    total += g.fraction;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kMalformed, "group fractions do not sum to 1");
  }
  for (const auto& g : groups) ValidateUtility(g.utility, num_states);

  Family family;
  family.setting_ = setting;
  family.mu_ = mu;
  family.accept_fractions_.assign(num_states, 0.0);
  for (const auto& g : groups) {
    for (int s = 0; s < num_states; ++s) {
      if (g.utility.PrefersAccept(s)) family.accept_fractions_[s] += g.fraction;
    }
  }
  family.low_boundary_ = ValidateMajority(family.accept_fractions_, mu);
  for (const auto& g : groups) {
    AgentType type = ClassifyUtility(g.utility, family.low_boundary_);
    family.group_types_.push_back(type);
    switch (type.tag) {
      case AgentTag::kFriendly:
        family.fractions_.friendly += g.fraction;
        break;
      case AgentTag::kUnfriendly:
        family.fractions_.unfriendly += g.fraction;
        break;
      case AgentTag::kContingent:
        family.fractions_.contingent += g.fraction;
        break;
    }
  }
  family.prior_ = std::move(prior);
  family.channel_ = std::move(channel);
  family.groups_ = std::move(groups);
  return family;
}

Alternative Family::InformedMajority(int state) const {
  return accept_fractions_[state] > mu_ ? Alternative::kAccept
                                        : Alternative::kReject;
}

int Family::utility_bound() const {
  int best = 0;
  for (const auto& g : groups_) best = std::max(best, g.utility.MaxValue());
  return best;
}

std::array<int, 3> Family::TypeCounts(int n) const {
  int friendly = 0;
  if (setting_ == Setting::kBinary) {
    friendly = FloorCount(fractions_.friendly * n);
  } else {
    friendly = n - FloorCount((1.0 - fractions_.friendly) * n);
  }
  const int unfriendly = FloorCount(fractions_.unfriendly * n);
  return {friendly, unfriendly, n - friendly - unfriendly};
}

Instance Family::Materialize(int n) const {
  if (n < 1) throw Error(ErrorCode::kMalformed, "N must be positive");
  const std::array<int, 3> totals = TypeCounts(n);
  auto tag_index = [](AgentTag tag) { return static_cast<int>(tag); };
  static_assert(static_cast<int>(AgentTag::kFriendly) == 0);
  static_assert(static_cast<int>(AgentTag::kUnfriendly) == 1);
  static_assert(static_cast<int>(AgentTag::kContingent) == 2);

  // Within a type, every group but the last takes floor(fraction * N); the
  // last group of the type absorbs the remainder of the type total.
  const int num_groups = static_cast<int>(groups_.size());
  std::vector<int> last_of_tag(3, -1);
  for (int g = 0; g < num_groups; ++g) {
    last_of_tag[tag_index(group_types_[g].tag)] = g;
  }
  std::vector<int> assigned(3, 0);
  std::vector<int> group_counts(num_groups, 0);
  for (int g = 0; g < num_groups; ++g) {
    const int t = tag_index(group_types_[g].tag);
    if (g != last_of_tag[t]) {
      group_counts[g] = FloorCount(groups_[g].fraction * n);
      assigned[t] += group_counts[g];
    }
  }
  for (int t = 0; t < 3; ++t) {
    if (last_of_tag[t] < 0) {
      if (totals[t] != 0) {
        throw Error(ErrorCode::kMalformed,
                    "rounding assigns agents to a type with no group");
      }
      continue;
    }
    const int rest = totals[t] - assigned[t];
    if (rest < 0) {
      throw Error(ErrorCode::kMalformed, "group rounding exceeds type total");
    }
    group_counts[last_of_tag[t]] = rest;
  }

  Instance instance;
  instance.raw_ = RawInstance{setting_, n, mu_, prior_, channel_, groups_, {}};
  for (int g = 0; g < num_groups; ++g) {
    for (int k = 0; k < group_counts[g]; ++k) {
      instance.agents_.push_back(groups_[g].utility);
      instance.agent_types_.push_back(group_types_[g]);
    }
  }
  instance.family_ = *this;
  instance.winning_count_ = WinningCount(mu_, n);
  instance.accept_fractions_ = accept_fractions_;
  instance.low_boundary_ = low_boundary_;
  instance.utility_bound_ = utility_bound();

  for (int s = 0; s < num_states(); ++s) {
    int count = 0;
    for (const auto& u : instance.agents_) count += u.PrefersAccept(s) ? 1 : 0;
    const bool realized_accept = count >= instance.winning_count_;
    if (realized_accept !=
        (InformedMajority(s) == Alternative::kAccept)) {
      throw Error(ErrorCode::kRoundingFlipsMajority,
                  "at N = " + std::to_string(n) +
                      " rounding flips the informed majority in " +
                      StateName(s));
    }
  }
  return instance;
}

// ---------------------------------------------------------------------------
// Instance

Instance ValidateInstance(const RawInstance& raw) {
  const bool has_groups = !raw.groups.empty();
  const bool has_agents = !raw.agents.empty();
  if (has_groups == has_agents) {
    throw Error(ErrorCode::kMalformed,
                "exactly one of groups and agents must be given");
  }
  if (has_groups) {
    Family family =
        Family::Create(raw.setting, raw.mu, raw.prior, raw.channel, raw.groups);
    return family.Materialize(raw.n);
  }

  ValidateParameters(raw.setting, raw.mu, raw.prior, raw.channel);
  const int n = static_cast<int>(raw.agents.size());
  if (raw.n != n) {
    throw Error(ErrorCode::kMalformed,
                "n = " + std::to_string(raw.n) + " but " + std::to_string(n) +
                    " agents listed");
  }
  const int num_states = raw.prior.num_states();
  for (const auto& u : raw.agents) ValidateUtility(u, num_states);

  Instance instance;
  instance.raw_ = raw;
  instance.agents_ = raw.agents;
  instance.accept_fractions_.assign(num_states, 0.0);
  for (const auto& u : raw.agents) {
    for (int s = 0; s < num_states; ++s) {
      if (u.PrefersAccept(s)) instance.accept_fractions_[s] += 1.0;
    }
  }
  for (double& a : instance.accept_fractions_) a /= n;
  instance.low_boundary_ = ValidateMajority(instance.accept_fractions_, raw.mu);
  instance.winning_count_ = WinningCount(raw.mu, n);
  for (const auto& u : raw.agents) {
    instance.agent_types_.push_back(
        ClassifyUtility(u, instance.low_boundary_));
    instance.utility_bound_ = std::max(instance.utility_bound_, u.MaxValue());
  }
  return instance;
}

Alternative Instance::InformedMajority(int state) const {
  return accept_fractions_[state] > mu() ? Alternative::kAccept
                                         : Alternative::kReject;
}

TypeFractions Instance::realized_fractions() const {
  const double n = static_cast<double>(this->n());
  return TypeFractions{CountOf(AgentTag::kFriendly) / n,
                       CountOf(AgentTag::kUnfriendly) / n,
                       CountOf(AgentTag::kContingent) / n};
}

TypeFractions Instance::type_fractions() const {
  return family_ ? family_->type_fractions() : realized_fractions();
}

int Instance::CountOf(AgentTag tag) const {
  return static_cast<int>(
      std::count_if(agent_types_.begin(), agent_types_.end(),
                    [tag](const AgentType& t) { return t.tag == tag; }));
}

std::vector<int> Instance::AgentsOf(AgentTag tag) const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i) {
    if (agent_types_[i].tag == tag) out.push_back(i);
  }
  return out;
}

AgentType ClassifyAgent(const UtilityFn& utility, const Instance& instance) {
  return ClassifyUtility(utility, instance.low_boundary());
}

Alternative InformedMajority(const Instance& instance, int state) {
  return instance.InformedMajority(state);
}

Profile RegularProfile(const Instance& instance, const Strategy& contingent) {
  const int m = instance.num_signals();
  Profile profile;
  profile.strategies.reserve(instance.n());
  for (const auto& type : instance.agent_types()) {
    switch (type.tag) {
      case AgentTag::kFriendly:
        profile.strategies.push_back(Strategy::Constant(m, 1.0));
        break;
      case AgentTag::kUnfriendly:
        profile.strategies.push_back(Strategy::Constant(m, 0.0));
        break;
      case AgentTag::kContingent:
        profile.strategies.push_back(contingent);
        break;
    }
  }
  return profile;
}

Profile SymmetricProfile(const Instance& instance, const Strategy& strategy) {
  return Profile{std::vector<Strategy>(instance.n(), strategy)};
}

bool IsRegular(const Profile& profile, const Instance& instance) {
  for (int i = 0; i < instance.n(); ++i) {
    const AgentTag tag = instance.agent_types()[i].tag;
    if (tag == AgentTag::kContingent) continue;
    const double want = tag == AgentTag::kFriendly ? 1.0 : 0.0;
    for (double b : profile[i].vote_probs) {
      if (b != want) return false;
    }
  }
  return true;
}

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformed:
      return "Malformed";
    case ErrorCode::kNonPositivePrior:
      return "NonPositivePrior";
    case ErrorCode::kRowNotStochastic:
      return "RowNotStochastic";
    case ErrorCode::kNoPositiveCorrelation:
      return "NoPositiveCorrelation";
    case ErrorCode::kNoStochasticDominance:
      return "NoStochasticDominance";
    case ErrorCode::kUtilityNotMonotone:
      return "UtilityNotMonotone";
    case ErrorCode::kDegenerateMajority:
      return "DegenerateMajority";
    case ErrorCode::kKnifeEdgeThreshold:
      return "KnifeEdgeThreshold";
    case ErrorCode::kRoundingFlipsMajority:
      return "RoundingFlipsMajority";
    case ErrorCode::kInstanceTooLarge:
      return "InstanceTooLarge";
    case ErrorCode::kNonPositiveExcess:
      return "NonPositiveExcess";
    case ErrorCode::kZeroVariance:
      return "ZeroVariance";
    case ErrorCode::kZeroProbabilitySignal:
      return "ZeroProbabilitySignal";
    case ErrorCode::kConstructionInfeasible:
      return "ConstructionInfeasible";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kUsage:
      return "Usage";
  }
  return "Unknown";
}

}  // namespace stratvote
