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

#ifndef STRATVOTE_EXACTPROB_H_
#define STRATVOTE_EXACTPROB_H_

#include <cstdint>
#include <vector>

#include "stratvote/model.h"

namespace stratvote {

// pmf[k] = Pr[exactly k votes for A | state].
struct OutcomeDistribution {
  std::vector<double> pmf;

  int n() const { return static_cast<int>(pmf.size()) - 1; }
  // Pr[#A >= k], summed in ascending k.
  double UpperTail(int k) const;
  // Pr[#A < k].
  double LowerTail(int k) const;
};

struct AnalysisReport {
  std::vector<double> lambda_accept;  // per state
  std::vector<double> lambda_reject;  // per state
  double fidelity = 0.0;
  double error_rate = 0.0;
  std::vector<double> expected_utilities;  // per agent
};

// Largest N accepted by BruteForceDistribution.
inline constexpr int kBruteForceLimit = 20;

double VoteProb(const Strategy& strategy, const SignalChannel& channel,
                int state);
// Per-agent vote probabilities in one state.
std::vector<double> VoteProbs(const Profile& profile, const Instance& instance,
                              int state);

// Poisson-binomial pmf by incremental convolution, O(N^2).
OutcomeDistribution PoissonBinomial(const std::vector<double>& probs);
OutcomeDistribution OutcomeDist(const Profile& profile,
                                const Instance& instance, int state);
// Enumerates all 2^N vote vectors. Throws kInstanceTooLarge above the limit.
OutcomeDistribution BruteForceDistribution(const Profile& profile,
                                           const Instance& instance, int state);

// Ex-ante utility given per-state win probabilities of A and R.
double ExpectedUtility(const UtilityFn& utility, const StatePrior& prior,
                       const std::vector<double>& lambda_accept,
                       const std::vector<double>& lambda_reject);
// A(Sigma) from per-state win probabilities.
double Fidelity(const Instance& instance,
                const std::vector<double>& lambda_accept,
                const std::vector<double>& lambda_reject);

AnalysisReport Analyze(const Profile& profile, const Instance& instance);

struct MonteCarloEstimate {
  double fidelity = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::int64_t hits = 0;
};

// Deterministic for a fixed seed whatever the worker count (IM_THREADS caps
// workers).
MonteCarloEstimate MonteCarloFidelity(const Profile& profile,
                                      const Instance& instance,
                                      std::int64_t samples,
                                      std::uint64_t seed);

// Worker count: IM_THREADS if set and positive, else hardware concurrency.
int WorkerCount();

}  // namespace stratvote

#endif  // STRATVOTE_EXACTPROB_H_
