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

#ifndef STRATVOTE_STRATEGIZE_H_
#define STRATVOTE_STRATEGIZE_H_

#include <optional>
#include <string>
#include <vector>

#include "stratvote/model.h"

namespace stratvote {

struct ConstructionOptions {
  double kappa = 0.6;
  // Override the default step-2 and step-3 magnitudes.
  std::optional<double> delta_l;
  std::optional<double> boost;
};

struct ConstructionTrace {
  double beta_star = 0.0;
  int split_signal = 1;  // signals [0, split) are "low"
  double delta_l = 0.0;
  double delta_h = 0.0;
  double delta_h_boost = 0.0;
  // Grouped low/high signal probabilities per state.
  std::vector<double> low_prob;
  std::vector<double> high_prob;
  Strategy sigma_1;  // after step 2
  Strategy sigma_prime;
  // Change of a contingent agent's A-vote probability relative to beta*,
  // per state: high_prob * delta_h - low_prob * delta_l.
  std::vector<double> shift_sigma_1;
  std::vector<double> shift_prime;
  // Closed-form excess shares per state.
  std::vector<double> cert_accept_sigma_1;
  std::vector<double> cert_reject_sigma_1;
  std::vector<double> cert_accept;
  std::vector<double> cert_reject;
  double min_certificate = 0.0;  // over the relevant side of each state
  double phi = 0.0;              // min_certificate / 2
  int n0 = 0;                    // N >= n0 keeps f^N >= phi after rounding
};

// Builds sigma' from the type fractions, threshold and channel. States
// 0..low_boundary have R as the informed majority, the rest A.
ConstructionTrace ConstructSigmaPrime(const TypeFractions& fractions, double mu,
                                      const SignalChannel& channel,
                                      int low_boundary,
                                      const ConstructionOptions& options = {});
ConstructionTrace ConstructSigmaPrime(const Family& family,
                                      const ConstructionOptions& options = {});
// Uses the instance's realized type fractions.
ConstructionTrace ConstructSigmaPrime(const Instance& instance,
                                      const ConstructionOptions& options = {});

// binary: 2B(B+1)(1 - A); general: T B ((T-1)B + 1)(1 - A).
double EpsilonBound(double fidelity, int utility_bound, int num_states);

// A coalition and the strategies its members switch to (one per member, or a
// single strategy shared by all).
struct DeviationCandidate {
  std::vector<int> coalition;
  std::vector<Strategy> strategies;
  std::string label;
};

struct DeviationSearchSpec {
  double resolution = 0.05;
  bool sigma_prime = true;     // (a)
  bool coalition_grid = true;  // (b)
  bool single_agents = true;   // (c)
  bool nonbinary_grid = false;  // run (b) on non-binary games too
  std::vector<DeviationCandidate> candidates;  // (d)
  ConstructionOptions construction;
};

struct DeviationFinding {
  std::vector<int> coalition;
  Profile alternative;
  std::vector<double> gains;  // per coalition member
  double max_gain = 0.0;
  bool weak_ok = false;
  std::string source;
};

// Exact gains of `candidate` against `profile`.
DeviationFinding EvaluateDeviation(const Profile& profile,
                                   const Instance& instance,
                                   const DeviationCandidate& candidate);

// First structured deviation with all gains >= 0 and one gain > epsilon.
// std::nullopt means none was found, which does not prove an equilibrium.
std::optional<DeviationFinding> RefuteEquilibrium(
    const Profile& profile, const Instance& instance, double epsilon,
    const DeviationSearchSpec& search = {});

// Grid of strategies at the given resolution. Binary (or two_level) grids
// vary (beta_low, beta_high) over the split at floor(M/2).
std::vector<Strategy> StrategyGrid(int num_signals, double resolution);

struct NoBneGame {
  int n0 = 0;
  Instance instance;
  std::vector<int> friendly;
  std::vector<int> contingent;
  std::vector<int> unfriendly;
  Profile sigma_1;  // one friendly agent informative
  Profile sigma_2;  // both contingent agents informative
  Profile sigma_3;  // one contingent agent always R
};

NoBneGame BuildNoBneInstance(int n0);

}  // namespace stratvote

#endif  // STRATVOTE_STRATEGIZE_H_
