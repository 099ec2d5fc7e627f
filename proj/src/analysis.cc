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

#include "stratvote/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stratvote/exactprob.h"

namespace stratvote {
namespace {

constexpr double kTieTolerance = 1e-12;

std::vector<Alternative> Majorities(const Instance& instance) {
  std::vector<Alternative> out;
  for (int s = 0; s < instance.num_states(); ++s) {
    out.push_back(instance.InformedMajority(s));
  }
  return out;
}

std::vector<Alternative> Majorities(const Family& family) {
  std::vector<Alternative> out;
  for (int s = 0; s < family.num_states(); ++s) {
    out.push_back(family.InformedMajority(s));
  }
  return out;
}

void RequireBinary(Setting setting, const char* what) {
  if (setting != Setting::kBinary) {
    throw Error(ErrorCode::kMalformed,
                std::string(what) + " is defined for binary games only");
  }
}

}  // namespace

ExcessShare ExcessFromMeans(const std::vector<double>& mean_accept,
                            const std::vector<double>& mean_reject,
                            const std::vector<Alternative>& majority,
                            double mu) {
  ExcessShare out;
  out.min_relevant = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < mean_accept.size(); ++s) {
    out.accept.push_back(mean_accept[s] - mu);
    out.reject.push_back(mean_reject[s] - (1.0 - mu));
    const double relevant = majority[s] == Alternative::kAccept
                                ? out.accept.back()
                                : out.reject.back();
    if (relevant < out.min_relevant) {
      out.min_relevant = relevant;
      out.argmin_state = static_cast<int>(s);
    }
  }
  return out;
}

ExcessShare ComputeExcessShare(const Profile& profile,
                               const Instance& instance) {
  std::vector<double> mean_accept;
  std::vector<double> mean_reject;
  const double n = instance.n();
  for (int s = 0; s < instance.num_states(); ++s) {
    double a = 0.0;
    double r = 0.0;
    for (double p : VoteProbs(profile, instance, s)) {
      a += p;
      r += 1.0 - p;
    }
    mean_accept.push_back(a / n);
    mean_reject.push_back(r / n);
  }
  return ExcessFromMeans(mean_accept, mean_reject, Majorities(instance),
                         instance.mu());
}

double HoeffdingLowerBound(double f, int n) {
  if (!(f > 0.0)) {
    throw Error(ErrorCode::kNonPositiveExcess,
                "Hoeffding bound needs f > 0, got " + std::to_string(f));
  }
  return std::clamp(1.0 - 2.0 * std::exp(-2.0 * f * f * n), 0.0, 1.0);
}

double HoeffdingFailureBound(double f, int n) {
  return std::exp(-2.0 * f * f * n);
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double BerryEsseenGap(const std::vector<double>& probs) {
  double variance = 0.0;
  double third = 0.0;
  for (double p : probs) {
    const double q = 1.0 - p;
    variance += p * q;
    third += p * q * (p * p + q * q);
  }
  if (!(variance > 0.0)) {
    throw Error(ErrorCode::kZeroVariance, "every vote is deterministic");
  }
  return kBerryEsseenC0 * third / std::pow(variance, 1.5);
}

double BerryEsseenGapBound(const Profile& profile, const Instance& instance,
                           int state) {
  return BerryEsseenGap(VoteProbs(profile, instance, state));
}

double BoundedVarianceUpperBound(double eta, double psi, double gap) {
  return std::clamp(1.0 - (NormalCdf(-eta / std::sqrt(psi)) - gap), 0.0, 1.0);
}

std::string DichotomyName(Dichotomy d) {
  return d == Dichotomy::kHighFidelity ? "HighFidelity" : "NotHighFidelity";
}

std::string SequenceCaseName(SequenceCase c) {
  switch (c) {
    case SequenceCase::kConvergesToOne:
      return "ConvergesToOne";
    case SequenceCase::kFailsNegative:
      return "FailsNegative";
    case SequenceCase::kFailsBoundedVariance:
      return "FailsBoundedVariance";
    case SequenceCase::kUndetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

ExcessShare FamilyExcess(const Family& family,
                         const std::vector<Strategy>& group_strategies) {
  const auto& groups = family.groups();
  if (group_strategies.size() != groups.size()) {
    throw Error(ErrorCode::kMalformed, "one strategy per group required");
  }
  std::vector<double> mean_accept(family.num_states(), 0.0);
  std::vector<double> mean_reject(family.num_states(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (int s = 0; s < family.num_states(); ++s) {
      const double p = VoteProb(group_strategies[g], family.channel(), s);
      mean_accept[s] += groups[g].fraction * p;
      mean_reject[s] += groups[g].fraction * (1.0 - p);
    }
  }
  return ExcessFromMeans(mean_accept, mean_reject, Majorities(family),
                         family.mu());
}

SymmetricVerdict ClassifySymmetric(const Strategy& sigma,
                                   const Family& family) {
  const int m = family.num_signals();
  std::vector<Strategy> strategies;
  for (const auto& type : family.group_types()) {
    switch (type.tag) {
      case AgentTag::kFriendly:
        strategies.push_back(Strategy::Constant(m, 1.0));
        break;
      case AgentTag::kUnfriendly:
        strategies.push_back(Strategy::Constant(m, 0.0));
        break;
      case AgentTag::kContingent:
        strategies.push_back(sigma);
        break;
    }
  }
  SymmetricVerdict out;
  out.excess = FamilyExcess(family, strategies);
  const double f = out.excess.min_relevant;
  out.verdict = f > 0.0 ? Dichotomy::kHighFidelity : Dichotomy::kNotHighFidelity;
  if (f == 0.0) {
    out.knife_edge = true;
    out.note = "KnifeEdge: f = 0 exactly";
  }
  return out;
}

SequenceVerdict ClassifySequence(const Family& family,
                                 const ProfileGenerator& generator,
                                 const std::vector<int>& ns,
                                 const SequenceOptions& options) {
  if (ns.size() < 5) {
    throw Error(ErrorCode::kUsage, "sequence screen needs at least 5 Ns");
  }
  if (!std::is_sorted(ns.begin(), ns.end()) ||
      std::adjacent_find(ns.begin(), ns.end()) != ns.end()) {
    throw Error(ErrorCode::kUsage, "Ns must be strictly ascending");
  }
  SequenceVerdict out;
  out.ns = ns;
  out.psi_estimate = std::numeric_limits<double>::infinity();
  for (int n : ns) {
    const Instance instance = family.Materialize(n);
    const Profile profile = generator(instance);
    const ExcessShare excess = ComputeExcessShare(profile, instance);
    const double scaled = std::sqrt(static_cast<double>(n)) * excess.min_relevant;
    const std::vector<double> probs =
        VoteProbs(profile, instance, excess.argmin_state);
    double variance = 0.0;
    for (double p : probs) variance += p * (1.0 - p);
    const double per_n = variance / n;
    out.scaled_excess.push_back(scaled);
    out.variance_per_n.push_back(per_n);
    out.psi_estimate = std::min(out.psi_estimate, per_n);
    if (variance > 0.0) {
      const double gap = BerryEsseenGap(probs);
      out.berry_esseen_gaps.push_back(gap);
      out.case3_upper_bounds.push_back(
          BoundedVarianceUpperBound(scaled, per_n, gap));
    } else {
      out.berry_esseen_gaps.push_back(std::numeric_limits<double>::quiet_NaN());
      out.case3_upper_bounds.push_back(
          std::numeric_limits<double>::quiet_NaN());
    }
  }

  const std::size_t k = ns.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = std::sqrt(static_cast<double>(ns[i]));
    const double y = out.scaled_excess[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  out.slope = denom > 0.0 ? (k * sxy - sx * sy) / denom : 0.0;
  out.intercept = (sy - out.slope * sx) / k;

  const auto& y = out.scaled_excess;
  const auto tail_begin = y.begin() + k / 2;
  const bool all_above = std::all_of(
      y.begin(), y.end(), [&](double v) { return v > options.threshold; });
  const bool tail_negative = std::all_of(
      tail_begin, y.end(), [&](double v) { return v <= options.eta; });
  const double tail_max = *std::max_element(tail_begin, y.end());

  if (all_above && out.slope > options.min_slope && y.back() > y.front()) {
    out.verdict = SequenceCase::kConvergesToOne;
    out.note = "sqrt(N) f^N positive and growing";
  } else if (tail_negative) {
    out.verdict = SequenceCase::kFailsNegative;
    out.note = "sqrt(N) f^N <= eta on the upper half of the samples";
  } else if (tail_max <= options.bounded_cap &&
             std::abs(out.slope) <= options.min_slope &&
             out.psi_estimate >= options.psi) {
    out.verdict = SequenceCase::kFailsBoundedVariance;
    out.note = "sqrt(N) f^N bounded with variance >= psi N";
  } else {
    out.verdict = SequenceCase::kUndetermined;
    out.note = "no case matched on the sampled Ns";
  }
  return out;
}

InformativeVerdict InformativeDichotomy(const Family& family) {
  RequireBinary(family.setting(), "informative dichotomy");
  const double high = family.channel().prob(kStateH, kSignalHigh);
  const double low = family.channel().prob(kStateL, kSignalHigh);
  InformativeVerdict out;
  out.f_high = high - family.mu();
  out.f_low = family.mu() - low;
  out.verdict = high > family.mu() && family.mu() > low
                    ? Dichotomy::kHighFidelity
                    : Dichotomy::kNotHighFidelity;
  return out;
}

std::vector<double> Posterior(const StatePrior& prior,
                              const SignalChannel& channel, int signal) {
  std::vector<double> post(prior.num_states());
  double total = 0.0;
  for (int s = 0; s < prior.num_states(); ++s) {
    post[s] = prior[s] * channel.prob(s, signal);
    total += post[s];
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kZeroProbabilitySignal,
                "signal " + std::to_string(signal + 1) + " has probability 0");
  }
  for (double& p : post) p /= total;
  return post;
}

SincereResult SincereStrategy(const UtilityFn& utility, const StatePrior& prior,
                              const SignalChannel& channel, double tie_break) {
  if (prior.num_states() != 2 || channel.num_signals() != 2) {
    throw Error(ErrorCode::kMalformed,
                "sincere voting is defined for binary games only");
  }
  SincereResult out;
  double accept[2];
  double reject[2];
  for (int m = 0; m < 2; ++m) {
    const std::vector<double> post = Posterior(prior, channel, m);
    accept[m] = 0.0;
    reject[m] = 0.0;
    for (int s = 0; s < 2; ++s) {
      accept[m] += post[s] * utility.accept(s);
      reject[m] += post[s] * utility.reject(s);
    }
  }
  out.accept_low = accept[kSignalLow];
  out.reject_low = reject[kSignalLow];
  out.accept_high = accept[kSignalHigh];
  out.reject_high = reject[kSignalHigh];

  // -1: R strictly better, 0: tie, +1: A strictly better.
  auto sign = [](double a, double r) {
    if (std::abs(a - r) <= kTieTolerance) return 0;
    return a > r ? 1 : -1;
  };
  const int low = sign(accept[0], reject[0]);
  const int high = sign(accept[1], reject[1]);
  if (low == -1 && high == -1) {
    out.case_number = 1;
    out.strategy = Strategy{{0.0, 0.0}};
  } else if (low == -1 && high == 0) {
    out.case_number = 2;
    out.strategy = Strategy{{0.0, tie_break}};
  } else if (low == -1 && high == 1) {
    out.case_number = 3;
    out.strategy = Strategy{{0.0, 1.0}};
  } else if (low == 0 && high == 1) {
    out.case_number = 4;
    out.strategy = Strategy{{tie_break, 1.0}};
  } else if (low == 1 && high == 1) {
    out.case_number = 5;
    out.strategy = Strategy{{1.0, 1.0}};
  } else {
    // Positive correlation plus monotone utilities rule this out.
    throw Error(ErrorCode::kMalformed,
                "sincere preferences not monotone in the signal");
  }
  return out;
}

SincereVerdict SincereDichotomy(const Family& family, double tie_break) {
  RequireBinary(family.setting(), "sincere dichotomy");
  SincereVerdict out;
  std::vector<Strategy> strategies;
  for (const auto& g : family.groups()) {
    out.group_results.push_back(
        SincereStrategy(g.utility, family.prior(), family.channel(), tie_break));
    strategies.push_back(out.group_results.back().strategy);
  }
  out.excess = FamilyExcess(family, strategies);
  out.knife_edge = out.excess.min_relevant == 0.0;
  out.verdict = out.excess.min_relevant > 0.0 ? Dichotomy::kHighFidelity
                                              : Dichotomy::kNotHighFidelity;
  return out;
}

Profile SincereProfile(const Instance& instance, double tie_break) {
  RequireBinary(instance.setting(), "sincere profile");
  Profile profile;
  for (const auto& u : instance.agents()) {
    profile.strategies.push_back(
        SincereStrategy(u, instance.prior(), instance.channel(), tie_break)
            .strategy);
  }
  return profile;
}

}  // namespace stratvote
