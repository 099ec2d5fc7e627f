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

#ifndef STRATVOTE_ANALYSIS_H_
#define STRATVOTE_ANALYSIS_H_

#include <functional>
#include <string>
#include <vector>

#include "stratvote/model.h"

namespace stratvote {

// Excess expected vote share per state. accept[s] is the mean A-vote
// probability minus mu, reject[s] the mean R-vote probability minus (1 - mu).
struct ExcessShare {
  std::vector<double> accept;
  std::vector<double> reject;
  // min over A-majority states of accept[], and over R-majority states of
  // reject[].
  double min_relevant = 0.0;
  int argmin_state = 0;
};

ExcessShare ComputeExcessShare(const Profile& profile,
                               const Instance& instance);
// Same quantity from per-state mean A-vote probabilities.
ExcessShare ExcessFromMeans(const std::vector<double>& mean_accept,
                            const std::vector<double>& mean_reject,
                            const std::vector<Alternative>& majority,
                            double mu);

// 1 - 2 exp(-2 f^2 N), clamped to [0, 1]. Throws kNonPositiveExcess if f <= 0.
double HoeffdingLowerBound(double f, int n);
// exp(-2 f^2 N): upper bound on the informed-majority win probability of a
// state whose relevant excess is f < 0.
double HoeffdingFailureBound(double f, int n);

// Berry-Esseen constant.
inline constexpr double kBerryEsseenC0 = 0.5600;

double NormalCdf(double x);
// C0 * sum E|X_n - p_n|^3 / s^3 for independent Bernoulli(p_n). Throws
// kZeroVariance when every p_n is 0 or 1.
double BerryEsseenGap(const std::vector<double>& probs);
double BerryEsseenGapBound(const Profile& profile, const Instance& instance,
                           int state);
// Upper bound on the success probability when sqrt(N) f <= eta and
// Var >= psi N: 1 - (Phi(-eta / sqrt(psi)) - gap).
double BoundedVarianceUpperBound(double eta, double psi, double gap);

enum class Dichotomy { kHighFidelity, kNotHighFidelity };
std::string DichotomyName(Dichotomy d);

struct SymmetricVerdict {
  Dichotomy verdict = Dichotomy::kNotHighFidelity;
  ExcessShare excess;  // N-independent closed form
  bool knife_edge = false;
  std::string note;
};

// Closed-form excess share of the regular family where group g plays
// group_strategies[g] (weights are the group fractions).
ExcessShare FamilyExcess(const Family& family,
                         const std::vector<Strategy>& group_strategies);
// Contingent agents play sigma; friendly/unfriendly agents their dominant
// strategies.
SymmetricVerdict ClassifySymmetric(const Strategy& sigma, const Family& family);

enum class SequenceCase {
  kConvergesToOne,
  kFailsNegative,
  kFailsBoundedVariance,
  kUndetermined,
};
std::string SequenceCaseName(SequenceCase c);

struct SequenceOptions {
  double threshold = 0.0;  // sqrt(N) f^N must stay above this
  double eta = -0.01;
  double psi = 0.01;
  double bounded_cap = 3.0;
  double min_slope = 1e-3;  // in sqrt(N) f^N per unit sqrt(N)
};

struct SequenceVerdict {
  SequenceCase verdict = SequenceCase::kUndetermined;
  std::vector<int> ns;
  std::vector<double> scaled_excess;  // sqrt(N) f^N
  std::vector<double> variance_per_n;  // at the argmin state
  double psi_estimate = 0.0;
  double slope = 0.0;  // least squares fit scaled ~ a + b sqrt(N)
  double intercept = 0.0;
  std::vector<double> berry_esseen_gaps;  // NaN where the variance is 0
  std::vector<double> case3_upper_bounds;
  std::string note;
};

using ProfileGenerator = std::function<Profile(const Instance&)>;

// Numeric screen over a finite list of N. Needs at least 5 ascending Ns.
SequenceVerdict ClassifySequence(const Family& family,
                                 const ProfileGenerator& generator,
                                 const std::vector<int>& ns,
                                 const SequenceOptions& options = {});

struct InformativeVerdict {
  Dichotomy verdict = Dichotomy::kNotHighFidelity;
  double f_high = 0.0;  // P_hH - mu
  double f_low = 0.0;   // mu - P_hL
};
InformativeVerdict InformativeDichotomy(const Family& family);

std::vector<double> Posterior(const StatePrior& prior,
                              const SignalChannel& channel, int signal);

struct SincereResult {
  Strategy strategy;
  int case_number = 0;  // 1..5
  double accept_low = 0.0;   // u(A | l)
  double reject_low = 0.0;   // u(R | l)
  double accept_high = 0.0;  // u(A | h)
  double reject_high = 0.0;  // u(R | h)
};
// Binary only. Ties vote A with probability tie_break on the tied signal.
SincereResult SincereStrategy(const UtilityFn& utility, const StatePrior& prior,
                              const SignalChannel& channel, double tie_break);

struct SincereVerdict {
  Dichotomy verdict = Dichotomy::kNotHighFidelity;
  std::vector<SincereResult> group_results;
  ExcessShare excess;
  bool knife_edge = false;
};
SincereVerdict SincereDichotomy(const Family& family, double tie_break);
Profile SincereProfile(const Instance& instance, double tie_break);

}  // namespace stratvote

#endif  // STRATVOTE_ANALYSIS_H_
