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

#include "stratvote/strategize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "stratvote/exactprob.h"

namespace stratvote {
namespace {

// upper[j] = Pr[#A among the fixed agents >= j], for j = 0..n+1.
struct FixedTail {
  std::vector<double> upper;

  explicit FixedTail(const OutcomeDistribution& dist) {
    upper.assign(dist.pmf.size() + 1, 0.0);
    for (int j = static_cast<int>(dist.pmf.size()) - 1; j >= 0; --j) {
      upper[j] = upper[j + 1] + dist.pmf[j];
    }
  }
  double AtLeast(int j) const {
    if (j <= 0) return 1.0;
    if (j >= static_cast<int>(upper.size())) return 0.0;
    return upper[j];
  }
};

// Probability A wins when `extra` additional votes have pmf `extra`.
double CombinedTail(const FixedTail& fixed, const OutcomeDistribution& extra,
                    int k) {
  double total = 0.0;
  for (int j = 0; j <= extra.n(); ++j) {
    total += extra.pmf[j] * fixed.AtLeast(k - j);
  }
  return std::clamp(total, 0.0, 1.0);
}

std::vector<FixedTail> TailsWithout(const Profile& profile,
                                    const Instance& instance,
                                    const std::vector<bool>& excluded) {
  std::vector<FixedTail> tails;
  for (int s = 0; s < instance.num_states(); ++s) {
    std::vector<double> probs;
    for (int i = 0; i < instance.n(); ++i) {
      if (!excluded[i]) {
        probs.push_back(VoteProb(profile[i], instance.channel(), s));
      }
    }
    tails.emplace_back(PoissonBinomial(probs));
  }
  return tails;
}

}  // namespace

ConstructionTrace ConstructSigmaPrime(const TypeFractions& fractions, double mu,
                                      const SignalChannel& channel,
                                      int low_boundary,
                                      const ConstructionOptions& options) {
  const int num_states = channel.num_states();
  const int num_signals = channel.num_signals();
  const int low = low_boundary;
  const int high = low_boundary + 1;
  if (low < 0 || high >= num_states) {
    throw Error(ErrorCode::kConstructionInfeasible,
                "majority boundary outside the state range");
  }
  const double alpha_c = fractions.contingent;
  if (!(alpha_c > 0.0)) {
    throw Error(ErrorCode::kConstructionInfeasible, "no contingent agents");
  }

  ConstructionTrace t;
  t.beta_star = (mu - fractions.friendly) / alpha_c;
  if (!(t.beta_star > 0.0 && t.beta_star < 1.0)) {
    throw Error(ErrorCode::kConstructionInfeasible,
                "beta* = " + std::to_string(t.beta_star) + " not in (0, 1)");
  }
  t.split_signal = num_signals / 2;
  for (int s = 0; s < num_states; ++s) {
    double lo = 0.0;
    for (int m = 0; m < t.split_signal; ++m) lo += channel.prob(s, m);
    t.low_prob.push_back(lo);
    t.high_prob.push_back(channel.TailProb(s, t.split_signal));
  }
  const double p_low_h = t.low_prob[high];
  const double p_high_h = t.high_prob[high];
  if (!(p_high_h > 0.0)) {
    throw Error(ErrorCode::kConstructionInfeasible,
                "no high signal in the boundary state");
  }

  // Feasible slack for delta_l keeps beta_l >= 0 and beta_h < 1.
  const double slack =
      std::min({t.beta_star, 1.0 - t.beta_star,
                (1.0 - t.beta_star) * p_high_h / std::max(p_low_h, 1e-300)});
  t.delta_l = options.delta_l.value_or(options.kappa * slack);
  t.delta_h = t.delta_l * p_low_h / p_high_h;
  const double beta_l = t.beta_star - t.delta_l;
  const double beta_h = t.beta_star + t.delta_h;
  if (!(t.delta_l > 0.0) || beta_l < 0.0 || beta_h > 1.0) {
    throw Error(ErrorCode::kConstructionInfeasible,
                "delta_l = " + std::to_string(t.delta_l) +
                    " leaves [0, 1]");
  }
  t.sigma_1 = Strategy::TwoLevel(num_signals, t.split_signal, beta_l, beta_h);

  auto certify = [&](double dl, double dh, std::vector<double>& shift,
                     std::vector<double>& cert_a, std::vector<double>& cert_r,
                     const Strategy& sigma) {
    for (int s = 0; s < num_states; ++s) {
      shift.push_back(t.high_prob[s] * dh - t.low_prob[s] * dl);
      double vp = 0.0;
      for (int m = 0; m < num_signals; ++m) vp += channel.prob(s, m) * sigma[m];
      cert_a.push_back(fractions.friendly + alpha_c * vp - mu);
      cert_r.push_back(fractions.unfriendly + alpha_c * (1.0 - vp) -
                       (1.0 - mu));
    }
  };
  certify(t.delta_l, t.delta_h, t.shift_sigma_1, t.cert_accept_sigma_1,
          t.cert_reject_sigma_1, t.sigma_1);

  const double room = 1.0 - beta_h;
  const double cap = t.cert_reject_sigma_1[low] / (2.0 * alpha_c);
  t.delta_h_boost = options.boost.value_or(std::min(room, cap));
  const double final_high = beta_h + t.delta_h_boost;
  if (!(t.delta_h_boost > 0.0) || final_high > 1.0 + kStochasticTolerance) {
    throw Error(ErrorCode::kConstructionInfeasible,
                "boost = " + std::to_string(t.delta_h_boost) +
                    " is not a valid increase");
  }
  t.sigma_prime = Strategy::TwoLevel(num_signals, t.split_signal, beta_l,
                                     std::min(final_high, 1.0));
  certify(t.delta_l, t.delta_h + t.delta_h_boost, t.shift_prime,
          t.cert_accept, t.cert_reject, t.sigma_prime);

  t.min_certificate = std::numeric_limits<double>::infinity();
  for (int s = 0; s < num_states; ++s) {
    const double c = s <= low ? t.cert_reject[s] : t.cert_accept[s];
    t.min_certificate = std::min(t.min_certificate, c);
  }
  if (!(t.min_certificate > 0.0)) {
    throw Error(ErrorCode::kConstructionInfeasible,
                "certificate " + std::to_string(t.min_certificate) +
                    " is not positive");
  }
  t.phi = t.min_certificate / 2.0;
  // Rounding moves f^N by at most 2/N; 2/N <= phi keeps f^N >= phi.
  t.n0 = static_cast<int>(std::ceil(2.0 / t.phi));
  return t;
}

ConstructionTrace ConstructSigmaPrime(const Family& family,
                                      const ConstructionOptions& options) {
  return ConstructSigmaPrime(family.type_fractions(), family.mu(),
                             family.channel(), family.low_boundary(), options);
}

ConstructionTrace ConstructSigmaPrime(const Instance& instance,
                                      const ConstructionOptions& options) {
  return ConstructSigmaPrime(instance.realized_fractions(), instance.mu(),
                             instance.channel(), instance.low_boundary(),
                             options);
}

double EpsilonBound(double fidelity, int utility_bound, int num_states) {
  const double b = utility_bound;
  const double miss = 1.0 - fidelity;
  if (num_states == 2) return 2.0 * b * (b + 1.0) * miss;
  const double t = num_states;
  return t * b * ((t - 1.0) * b + 1.0) * miss;
}

std::vector<Strategy> StrategyGrid(int num_signals, double resolution) {
  if (!(resolution > 0.0 && resolution <= 1.0)) {
    throw Error(ErrorCode::kUsage, "grid resolution must lie in (0, 1]");
  }
  const int steps = static_cast<int>(std::lround(1.0 / resolution));
  std::vector<Strategy> grid;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      grid.push_back(Strategy::TwoLevel(num_signals, num_signals / 2,
                                        static_cast<double>(i) / steps,
                                        static_cast<double>(j) / steps));
    }
  }
  return grid;
}

DeviationFinding EvaluateDeviation(const Profile& profile,
                                   const Instance& instance,
                                   const DeviationCandidate& candidate) {
  const auto& d = candidate.coalition;
  if (d.empty()) throw Error(ErrorCode::kUsage, "empty coalition");
  if (candidate.strategies.size() != 1 &&
      candidate.strategies.size() != d.size()) {
    throw Error(ErrorCode::kUsage,
                "need one strategy or one per coalition member");
  }
  std::set<int> seen;
  for (int i : d) {
    if (i < 0 || i >= instance.n() || !seen.insert(i).second) {
      throw Error(ErrorCode::kUsage, "bad coalition member " +
                                         std::to_string(i));
    }
  }
  DeviationFinding f;
  f.coalition = d;
  f.alternative = profile;
  for (std::size_t k = 0; k < d.size(); ++k) {
    f.alternative[d[k]] = candidate.strategies.size() == 1
                              ? candidate.strategies.front()
                              : candidate.strategies[k];
  }
  const AnalysisReport before = Analyze(profile, instance);
  const AnalysisReport after = Analyze(f.alternative, instance);
  f.max_gain = -std::numeric_limits<double>::infinity();
  f.weak_ok = true;
  for (int i : d) {
    const double g =
        after.expected_utilities[i] - before.expected_utilities[i];
    f.gains.push_back(g);
    f.max_gain = std::max(f.max_gain, g);
    if (g < 0.0) f.weak_ok = false;
  }
  f.source = candidate.label;
  return f;
}

std::optional<DeviationFinding> RefuteEquilibrium(
    const Profile& profile, const Instance& instance, double epsilon,
    const DeviationSearchSpec& search) {
  const int n = instance.n();
  const int k = instance.winning_count();
  const int num_states = instance.num_states();
  const AnalysisReport base = Analyze(profile, instance);
  const std::vector<int> contingent = instance.AgentsOf(AgentTag::kContingent);
  auto refutes = [&](const DeviationFinding& f) {
    return f.weak_ok && f.max_gain > epsilon;
  };

  // (a) every contingent agent switches to sigma'.
  if (search.sigma_prime && !contingent.empty()) {
    std::optional<ConstructionTrace> trace;
    try {
      trace = ConstructSigmaPrime(instance, search.construction);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kConstructionInfeasible) throw;
    }
    if (trace) {
      DeviationFinding f = EvaluateDeviation(
          profile, instance,
          {contingent, {trace->sigma_prime}, "contingent-sigma-prime"});
      if (refutes(f)) return f;
    }
  }

  const bool binary = instance.setting() == Setting::kBinary;
  const std::vector<Strategy> grid =
      (search.coalition_grid || search.single_agents)
          ? StrategyGrid(instance.num_signals(), search.resolution)
          : std::vector<Strategy>{};

  // (b) every contingent agent switches to one common grid strategy.
  if (search.coalition_grid && !contingent.empty() &&
      (binary || search.nonbinary_grid)) {
    std::vector<bool> excluded(n, false);
    for (int i : contingent) excluded[i] = true;
    const std::vector<FixedTail> tails =
        TailsWithout(profile, instance, excluded);
    const int size = static_cast<int>(contingent.size());
    std::vector<double> la(num_states);
    std::vector<double> lr(num_states);
    for (const Strategy& s : grid) {
      for (int w = 0; w < num_states; ++w) {
        const double q = VoteProb(s, instance.channel(), w);
        la[w] = CombinedTail(tails[w],
                             PoissonBinomial(std::vector<double>(size, q)), k);
        lr[w] = 1.0 - la[w];
      }
      bool weak = true;
      double best = -std::numeric_limits<double>::infinity();
      for (int i : contingent) {
        const double g = ExpectedUtility(instance.agents()[i], instance.prior(),
                                         la, lr) -
                         base.expected_utilities[i];
        weak = weak && g >= 0.0;
        best = std::max(best, g);
      }
      if (weak && best > epsilon) {
        DeviationFinding f = EvaluateDeviation(
            profile, instance, {contingent, {s}, "contingent-grid"});
        if (refutes(f)) return f;
      }
    }
  }

  // (c) single-agent grid best responses. Agents with the same strategy and
  // utility share the distribution of the others' votes.
  if (search.single_agents) {
    std::map<std::pair<std::vector<double>, std::vector<std::array<int, 2>>>,
             bool>
        checked;
    for (int i = 0; i < n; ++i) {
      const auto key =
          std::make_pair(profile[i].vote_probs, instance.agents()[i].values);
      if (!checked.emplace(key, true).second) continue;
      std::vector<bool> excluded(n, false);
      excluded[i] = true;
      const std::vector<FixedTail> tails =
          TailsWithout(profile, instance, excluded);
      std::vector<double> la(num_states);
      std::vector<double> lr(num_states);
      double best = -std::numeric_limits<double>::infinity();
      const Strategy* best_strategy = nullptr;
      for (const Strategy& s : grid) {
        for (int w = 0; w < num_states; ++w) {
          const double p = VoteProb(s, instance.channel(), w);
          la[w] = std::clamp(
              p * tails[w].AtLeast(k - 1) + (1.0 - p) * tails[w].AtLeast(k),
              0.0, 1.0);
          lr[w] = 1.0 - la[w];
        }
        const double g = ExpectedUtility(instance.agents()[i],
                                         instance.prior(), la, lr) -
                         base.expected_utilities[i];
        if (g > best) {
          best = g;
          best_strategy = &s;
        }
      }
      if (best_strategy != nullptr && best > epsilon) {
        DeviationFinding f = EvaluateDeviation(
            profile, instance, {{i}, {*best_strategy}, "single-agent-grid"});
        if (refutes(f)) return f;
      }
    }
  }

  // (d) caller-supplied candidates.
  for (const auto& c : search.candidates) {
    DeviationFinding f = EvaluateDeviation(profile, instance, c);
    if (f.source.empty()) f.source = "explicit";
    if (refutes(f)) return f;
  }
  return std::nullopt;
}

NoBneGame BuildNoBneInstance(int n0) {
  if (n0 < 1) throw Error(ErrorCode::kUsage, "N0 must be >= 1");
  const UtilityFn friendly{{{{99, 1}}, {{100, 0}}}};
  const UtilityFn contingent{{{{0, 100}}, {{90, 0}}}};
  const UtilityFn unfriendly{{{{0, 100}}, {{1, 99}}}};
  RawInstance raw;
  raw.setting = Setting::kBinary;
  raw.n = 2 * n0 + 3;
  raw.mu = 0.5;
  raw.prior = StatePrior{{0.5, 0.5}};
  raw.channel = SignalChannel{{{0.8, 0.2}, {0.2, 0.8}}};
  std::vector<int> f_idx, c_idx, u_idx;
  for (int i = 0; i < n0 + 1; ++i) {
    f_idx.push_back(static_cast<int>(raw.agents.size()));
    raw.agents.push_back(friendly);
  }
  for (int i = 0; i < 2; ++i) {
    c_idx.push_back(static_cast<int>(raw.agents.size()));
    raw.agents.push_back(contingent);
  }
  for (int i = 0; i < n0; ++i) {
    u_idx.push_back(static_cast<int>(raw.agents.size()));
    raw.agents.push_back(unfriendly);
  }
  Instance instance = ValidateInstance(raw);
  const Profile sigma_2 = RegularProfile(instance, Strategy::Informative(2));
  Profile sigma_1 = sigma_2;
  sigma_1[f_idx.back()] = Strategy::Informative(2);
  Profile sigma_3 = sigma_2;
  sigma_3[c_idx.back()] = Strategy::Constant(2, 0.0);
  return NoBneGame{.n0 = n0,
                   .instance = std::move(instance),
                   .friendly = f_idx,
                   .contingent = c_idx,
                   .unfriendly = u_idx,
                   .sigma_1 = sigma_1,
                   .sigma_2 = sigma_2,
                   .sigma_3 = sigma_3};
}

}  // namespace stratvote
