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

#include "stratvote/exactprob.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace stratvote {
namespace {

// SplitMix64 finalizer, used as a stateless counter-based generator.
std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform [0, 1) keyed by (seed, sample, stream). stream 0 draws the state;
// agent i uses 2i+1 for its signal and 2i+2 for its vote.
double Uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t stream) {
  const std::uint64_t h = Mix(Mix(Mix(seed) ^ sample) ^ (stream * 0xd6e8feb86659fd93ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

int Draw(const std::vector<double>& probs, double u) {
  double acc = 0.0;
  const int last = static_cast<int>(probs.size()) - 1;
  for (int i = 0; i < last; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return last;
}

void CheckProfile(const Profile& profile, const Instance& instance) {
  if (profile.size() != instance.n()) {
    throw Error(ErrorCode::kMalformed,
                "profile has " + std::to_string(profile.size()) +
                    " strategies for " + std::to_string(instance.n()) +
                    " agents");
  }
  for (const auto& s : profile.strategies) {
    if (s.num_signals() != instance.num_signals()) {
      throw Error(ErrorCode::kMalformed, "strategy length != signal count");
    }
    for (double b : s.vote_probs) {
      if (!(b >= 0.0 && b <= 1.0)) {
        throw Error(ErrorCode::kMalformed, "vote probability outside [0, 1]");
      }
    }
  }
}

}  // namespace

double OutcomeDistribution::UpperTail(int k) const {
  double total = 0.0;
  for (int i = std::max(k, 0); i <= n(); ++i) total += pmf[i];
  return total;
}

double OutcomeDistribution::LowerTail(int k) const {
  double total = 0.0;
  for (int i = 0; i < std::min(k, n() + 1); ++i) total += pmf[i];
  return total;
}

double VoteProb(const Strategy& strategy, const SignalChannel& channel,
                int state) {
  double p = 0.0;
  for (int m = 0; m < channel.num_signals(); ++m) {
    p += channel.prob(state, m) * strategy[m];
  }
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> VoteProbs(const Profile& profile, const Instance& instance,
                              int state) {
  CheckProfile(profile, instance);
  std::vector<double> probs;
  probs.reserve(profile.size());
  for (const auto& s : profile.strategies) {
    probs.push_back(VoteProb(s, instance.channel(), state));
  }
  return probs;
}

OutcomeDistribution PoissonBinomial(const std::vector<double>& probs) {
  const int n = static_cast<int>(probs.size());
  // Only agents with 0 < p < 1 are convolved; sure A-votes just shift.
  std::vector<double> core(1, 1.0);
  core.reserve(n + 1);
  int shift = 0;
  for (double p : probs) {
    if (p >= 1.0) {
      ++shift;
      continue;
    }
    if (p <= 0.0) continue;
    const double q = 1.0 - p;
    core.push_back(0.0);
    for (std::size_t k = core.size() - 1; k > 0; --k) {
      core[k] = core[k] * q + core[k - 1] * p;
    }
    core[0] *= q;
  }
  OutcomeDistribution dist;
  dist.pmf.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < core.size(); ++k) dist.pmf[shift + k] = core[k];
  return dist;
}

OutcomeDistribution OutcomeDist(const Profile& profile,
                                const Instance& instance, int state) {
  return PoissonBinomial(VoteProbs(profile, instance, state));
}

OutcomeDistribution BruteForceDistribution(const Profile& profile,
                                           const Instance& instance,
                                           int state) {
  const int n = instance.n();
  if (n > kBruteForceLimit) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "brute force enumeration limited to N <= " +
                    std::to_string(kBruteForceLimit));
  }
  const std::vector<double> probs = VoteProbs(profile, instance, state);
  OutcomeDistribution dist;
  dist.pmf.assign(n + 1, 0.0);
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      w *= (mask >> i) & 1u ? probs[i] : 1.0 - probs[i];
    }
    dist.pmf[std::popcount(mask)] += w;
  }
  return dist;
}

double ExpectedUtility(const UtilityFn& utility, const StatePrior& prior,
                       const std::vector<double>& lambda_accept,
                       const std::vector<double>& lambda_reject) {
  double total = 0.0;
  for (int s = 0; s < prior.num_states(); ++s) {
    total += prior[s] * (lambda_accept[s] * utility.accept(s) +
                         lambda_reject[s] * utility.reject(s));
  }
  return total;
}

double Fidelity(const Instance& instance,
                const std::vector<double>& lambda_accept,
                const std::vector<double>& lambda_reject) {
  double total = 0.0;
  for (int s = 0; s < instance.num_states(); ++s) {
    const bool accept = instance.InformedMajority(s) == Alternative::kAccept;
    total += instance.prior()[s] * (accept ? lambda_accept[s] : lambda_reject[s]);
  }
  return total;
}

AnalysisReport Analyze(const Profile& profile, const Instance& instance) {
  AnalysisReport report;
  const int k = instance.winning_count();
  for (int s = 0; s < instance.num_states(); ++s) {
    const OutcomeDistribution dist = OutcomeDist(profile, instance, s);
    const double lambda_a = std::clamp(dist.UpperTail(k), 0.0, 1.0);
    report.lambda_accept.push_back(lambda_a);
    report.lambda_reject.push_back(1.0 - lambda_a);
  }
  report.fidelity = std::clamp(
      Fidelity(instance, report.lambda_accept, report.lambda_reject), 0.0, 1.0);
  double error = 0.0;
  for (int s = 0; s < instance.num_states(); ++s) {
    const bool accept = instance.InformedMajority(s) == Alternative::kAccept;
    error += instance.prior()[s] *
             (accept ? report.lambda_reject[s] : report.lambda_accept[s]);
  }
  report.error_rate = std::clamp(error, 0.0, 1.0);
  report.expected_utilities.reserve(instance.n());
  for (const auto& u : instance.agents()) {
    report.expected_utilities.push_back(ExpectedUtility(
        u, instance.prior(), report.lambda_accept, report.lambda_reject));
  }
  return report;
}

int WorkerCount() {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) workers = workers > 0 ? std::min(workers, cap) : cap;
  }
  return std::max(workers, 1);
}

MonteCarloEstimate MonteCarloFidelity(const Profile& profile,
                                      const Instance& instance,
                                      std::int64_t samples,
                                      std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::kUsage, "samples must be >= 1");
  CheckProfile(profile, instance);
  const int n = instance.n();
  const int k = instance.winning_count();
  std::vector<bool> majority_accept(instance.num_states());
  for (int s = 0; s < instance.num_states(); ++s) {
    majority_accept[s] = instance.InformedMajority(s) == Alternative::kAccept;
  }

  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    std::int64_t hits = 0;
    for (std::int64_t t = begin; t < end; ++t) {
      const auto sample = static_cast<std::uint64_t>(t);
      const int state = Draw(instance.prior().probs, Uniform(seed, sample, 0));
      const auto& row = instance.channel().rows[state];
      int votes = 0;
      for (int i = 0; i < n; ++i) {
        const auto stream = 2 * static_cast<std::uint64_t>(i);
        const int signal = Draw(row, Uniform(seed, sample, stream + 1));
        votes += Uniform(seed, sample, stream + 2) < profile[i][signal] ? 1 : 0;
      }
      if ((votes >= k) == majority_accept[state]) ++hits;
    }
    return hits;
  };

  const int workers =
      static_cast<int>(std::min<std::int64_t>(WorkerCount(), samples));
  std::vector<std::int64_t> partial(workers, 0);
  std::vector<std::thread> threads;
  const std::int64_t chunk = (samples + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min(samples, begin + chunk);
    if (w + 1 == workers) {
      partial[w] = run_range(begin, end);
    } else {
      threads.emplace_back(
          [&, w, begin, end] { partial[w] = run_range(begin, end); });
    }
  }
  for (auto& t : threads) t.join();

  MonteCarloEstimate est;
  est.samples = samples;
  for (std::int64_t h : partial) est.hits += h;
  est.fidelity = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.std_error = std::sqrt(est.fidelity * (1.0 - est.fidelity) /
                            static_cast<double>(samples));
  return est;
}

}  // namespace stratvote
