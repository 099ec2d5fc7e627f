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

// One PASS/FAIL line per acceptance criterion. Tolerances and runtime limits
// are fixed here; the exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "random_games.h"
#include "stratvote/analysis.h"
#include "stratvote/exactprob.h"
#include "stratvote/reference_games.h"
#include "stratvote/strategize.h"

namespace stratvote {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string misses;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      misses += " [miss: " + what + "]";
    }
  }
};

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Frozen from the first verified run of the exact DP.
constexpr double kGoldenTolerance = 1e-9;
constexpr double kGoldenHighFidelity500 = 0.99999971509577512;
constexpr double kGoldenHighUtility500 = 5.9999994301915631;
constexpr double kGoldenLowFidelity500 = 0.61497571378130822;
constexpr double kGoldenConstructedFidelity500 = 0.96981854402349876;
constexpr double kGoldenConstructedGain500 = 0.70355803843220244;

void TableAndCycle(Outcome& o) {
  const double table[3][3] = {{50.396, 85.12, 50.396},
                              {66.14, 75.2, 34.46},
                              {50.3, 76.0, 50.3}};
  for (int n0 : {1, 10, 50}) {
    const NoBneGame g = BuildNoBneInstance(n0);
    const Profile* profiles[3] = {&g.sigma_1, &g.sigma_2, &g.sigma_3};
    const int agents[3] = {g.friendly.front(), g.contingent.front(),
                           g.unfriendly.front()};
    for (int p = 0; p < 3; ++p) {
      const AnalysisReport r = Analyze(*profiles[p], g.instance);
      for (int a = 0; a < 3; ++a) {
        o.Require(Near(r.expected_utilities[agents[a]], table[p][a], 1e-9),
                  "N0=" + std::to_string(n0) + " table entry");
      }
    }
    const Strategy informative = Strategy::Informative(2);
    const DeviationCandidate steps[3] = {
        {{g.friendly.back()}, {Strategy::Constant(2, 1.0)}, "1->2"},
        {{g.contingent.back()}, {Strategy::Constant(2, 0.0)}, "2->3"},
        {{g.friendly.back(), g.contingent[0], g.contingent[1]},
         {informative, informative, informative},
         "3->1"}};
    const Profile* from[3] = {&g.sigma_1, &g.sigma_2, &g.sigma_3};
    const Profile* to[3] = {&g.sigma_2, &g.sigma_3, &g.sigma_1};
    for (int s = 0; s < 3; ++s) {
      const DeviationFinding f = EvaluateDeviation(*from[s], g.instance, steps[s]);
      o.Require(f.alternative == *to[s], "cycle step " + steps[s].label);
      for (double gain : f.gains) {
        o.Require(gain > 0.0, "gain on " + steps[s].label);
      }
    }
  }
  o.detail << "tables for N0 in {1,10,50}, cycle gains > 0";
}

void ExcessShares(Outcome& o) {
  const double tol = 1e-12;
  const ExcessShare c1 =
      ClassifySymmetric(Strategy::Informative(2), AccuracyFamily(1)).excess;
  const ExcessShare c2 =
      ClassifySymmetric(Strategy::Informative(2), AccuracyFamily(2)).excess;
  const ExcessShare c3 =
      ClassifySymmetric(Strategy{{0.48, 0.96}}, AccuracyFamily(2)).excess;
  o.Require(Near(c1.accept[kStateH], 0.05, tol), "case 1 f_H");
  o.Require(Near(c1.reject[kStateL], 0.3, tol), "case 1 f_L");
  o.Require(Near(c2.accept[kStateH], -0.025, tol), "case 2 f_H");
  o.Require(Near(c3.accept[kStateH], 0.02, tol), "sigma' f_H");
  o.Require(Near(c3.reject[kStateL], 0.112, tol), "sigma' f_L");
  o.detail << "f_H=" << c1.accept[kStateH] << " f_L=" << c1.reject[kStateL]
           << " | f_H=" << c2.accept[kStateH] << " | f_H=" << c3.accept[kStateH]
           << " f_L=" << c3.reject[kStateL];
}

void HandConstruction(Outcome& o) {
  const double tol = 1e-12;
  ConstructionOptions opts;
  opts.delta_l = 0.3;
  opts.boost = 0.06;
  const ConstructionTrace t = ConstructSigmaPrime(AccuracyFamily(2), opts);
  o.Require(Near(t.sigma_prime[0], 0.5, tol) && Near(t.sigma_prime[1], 0.96, tol),
            "sigma' = (0.5, 0.96)");
  o.Require(Near(t.sigma_1[0], 0.5, tol) && Near(t.sigma_1[1], 0.9, tol),
            "sigma_1 = (0.5, 0.9)");
  o.Require(Near(t.shift_sigma_1[kStateH], 0.0, tol), "sigma_1 H check = 0");
  o.Require(Near(t.shift_prime[kStateH], 0.05, tol), "final H check = +0.05");
  o.Require(Near(t.shift_prime[kStateL], -0.208, tol), "final L check = -0.208");
  o.detail << "sigma'=(" << t.sigma_prime[0] << "," << t.sigma_prime[1]
           << ") sigma_1=(" << t.sigma_1[0] << "," << t.sigma_1[1]
           << ") checks H=" << t.shift_prime[kStateH]
           << " L=" << t.shift_prime[kStateL];
}

void HoeffdingSoundness(Outcome& o) {
  std::mt19937_64 rng(404);
  int families = 0;
  int positive = 0;
  int negative = 0;
  int violations = 0;
  while (families < 200) {
    const Family f = testing::RandomBinaryFamily(rng);
    const auto insts = testing::MaterializeAll(f, {50, 200, 1000});
    if (!insts) continue;
    ++families;
    const Strategy sigma = families % 4 == 0
                               ? Strategy::Informative(2)
                               : testing::RandomStrategy(rng, 2);
    for (const Instance& inst : *insts) {
      const Profile p = RegularProfile(inst, sigma);
      const ExcessShare e = ComputeExcessShare(p, inst);
      const AnalysisReport r = Analyze(p, inst);
      if (e.min_relevant > 0.0) {
        ++positive;
        if (r.fidelity < HoeffdingLowerBound(e.min_relevant, inst.n())) {
          ++violations;
        }
      }
      for (int s = 0; s < 2; ++s) {
        const bool accept = inst.InformedMajority(s) == Alternative::kAccept;
        const double fs = accept ? e.accept[s] : e.reject[s];
        const double win = accept ? r.lambda_accept[s] : r.lambda_reject[s];
        if (fs <= -0.05) {
          ++negative;
          if (win > std::exp(-2.0 * 0.05 * 0.05)) ++violations;
        }
      }
    }
  }
  o.Require(violations == 0, "bound violations");
  o.Require(positive > 0 && negative > 0, "both sides exercised");
  o.detail << families << " families, " << positive << " positive and "
           << negative << " negative cases, " << violations << " violations";
}

void OracleEquivalence(Outcome& o) {
  std::mt19937_64 rng(505);
  int cases = 0;
  double worst = 0.0;
  while (cases < 200) {
    const Family f = testing::RandomBinaryFamily(rng);
    const auto inst = testing::MaterializeAll(f, {testing::SmallInt(rng, 1, 12)});
    if (!inst) continue;
    const Profile p = testing::RandomProfile(rng, inst->front());
    for (int s = 0; s < 2; ++s) {
      const auto dp = OutcomeDist(p, inst->front(), s);
      const auto bf = BruteForceDistribution(p, inst->front(), s);
      for (std::size_t k = 0; k < dp.pmf.size(); ++k) {
        worst = std::max(worst, std::abs(dp.pmf[k] - bf.pmf[k]));
      }
    }
    ++cases;
  }
  o.Require(worst <= 1e-12, "pmf difference");
  o.detail << cases << " profiles, max |dp - brute| = " << worst;
}

double ContingentUtility(const AnalysisReport& r, const Instance& inst) {
  double total = 0.0;
  const auto idx = inst.AgentsOf(AgentTag::kContingent);
  for (int i : idx) total += r.expected_utilities[i];
  return total / idx.size();
}

void AccuracyTrends(Outcome& o) {
  const Instance high = AccuracyFamily(1).Materialize(500);
  const AnalysisReport rh = Analyze(RegularProfile(high, Strategy::Informative(2)), high);
  const double high_utility = ContingentUtility(rh, high);
  o.Require(rh.fidelity >= 0.999, "case 1 fidelity >= 0.999");
  o.Require(std::abs(high_utility - 6.0) <= 0.05, "case 1 utility near 6");

  double worst_low = 0.0;
  for (int n = 100; n <= 500; n += 50) {
    const Instance low = AccuracyFamily(2).Materialize(n);
    const double fid =
        Analyze(RegularProfile(low, Strategy::Informative(2)), low).fidelity;
    worst_low = std::max(worst_low, fid);
  }
  o.Require(worst_low <= 0.95, "case 2 informative <= 0.95");

  const Instance low = AccuracyFamily(2).Materialize(500);
  const Profile informative = RegularProfile(low, Strategy::Informative(2));
  const AnalysisReport rl = Analyze(informative, low);
  const Strategy constructed = ConstructSigmaPrime(AccuracyFamily(2)).sigma_prime;
  const AnalysisReport rc = Analyze(RegularProfile(low, constructed), low);
  const AnalysisReport rp = Analyze(RegularProfile(low, Strategy{{0.48, 0.96}}), low);
  o.Require(rc.fidelity >= 0.999, "constructed sigma' fidelity >= 0.999");
  const double gain = ContingentUtility(rc, low) - ContingentUtility(rl, low);
  o.Require(gain >= 0.4, "gain >= 0.4");

  o.Require(Near(rh.fidelity, kGoldenHighFidelity500, kGoldenTolerance) &&
                Near(high_utility, kGoldenHighUtility500, kGoldenTolerance) &&
                Near(rl.fidelity, kGoldenLowFidelity500, kGoldenTolerance) &&
                Near(rc.fidelity, kGoldenConstructedFidelity500, kGoldenTolerance) &&
                Near(gain, kGoldenConstructedGain500, kGoldenTolerance),
            "frozen goldens");
  o.detail.precision(10);
  o.detail << "case 1: A=" << rh.fidelity << " u_C=" << high_utility
           << "; case 2: max A(N>=100)=" << worst_low << "; sigma'=("
           << constructed[0] << "," << constructed[1] << ") A=" << rc.fidelity
           << " gain=" << gain << "; (0.48,0.96) A=" << rp.fidelity;
}

void Refutation(Outcome& o) {
  const Instance low = AccuracyFamily(2).Materialize(500);
  const auto found =
      RefuteEquilibrium(RegularProfile(low, Strategy::Informative(2)), low, 0.4);
  o.Require(found.has_value(), "case 2 refuted");
  if (found) {
    o.Require(found->source == "contingent-sigma-prime", "via sigma'");
    o.Require(found->weak_ok && found->max_gain > 0.4, "gain > 0.4");
    o.detail << "case 2: " << found->source << " gain " << found->max_gain;
  }
  const Instance high = AccuracyFamily(1).Materialize(500);
  const Profile informative = RegularProfile(high, Strategy::Informative(2));
  const double eps = EpsilonBound(Analyze(informative, high).fidelity,
                                  high.utility_bound(), 2);
  const bool survived = !RefuteEquilibrium(informative, high, eps).has_value();
  o.Require(survived, "case 1 not refuted");
  o.detail << "; case 1 at eps=" << eps << ": "
           << (survived ? "not refuted" : "refuted");
}

void SincereTaxonomy(Outcome& o) {
  const double tol = 1e-12;
  const StatePrior prior{{0.5, 0.5}};
  const SignalChannel channel{{{0.8, 0.2}, {0.2, 0.8}}};
  const double tie = 0.3;
  const SincereResult s1 = SincereStrategy(SincereUtility(1), prior, channel, tie);
  const SincereResult s2 = SincereStrategy(SincereUtility(2), prior, channel, tie);
  const SincereResult s3 = SincereStrategy(SincereUtility(3), prior, channel, tie);
  o.Require(s1.strategy == Strategy::Informative(2), "case 1 informative");
  o.Require(s2.strategy == Strategy::Constant(2, 1.0), "case 2 always A");
  o.Require(s3.strategy == Strategy{{tie, 1.0}}, "case 3 (tie, 1)");
  o.Require(Near(s2.accept_low, 1.8, tol) && Near(s2.reject_low, 1.6, tol) &&
                Near(s2.accept_high, 4.2, tol) && Near(s2.reject_high, 0.4, tol),
            "case 2 utilities");
  o.Require(Near(s3.accept_low, 1.6, tol) && Near(s3.reject_low, 1.6, tol) &&
                Near(s3.accept_high, 3.4, tol) && Near(s3.reject_high, 0.4, tol),
            "case 3 utilities");

  std::mt19937_64 rng(808);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const double mu = testing::Uniform(rng, 0.05, 0.95);
    const double p_h = testing::Uniform(rng, 0.1, 0.9);
    const double hl = testing::Uniform(rng, 0.02, 0.9);
    const double hh = testing::Uniform(rng, hl + 0.02, 0.99);
    const double t = testing::Uniform(rng, 0.0, 1.0);
    const Family f = Family::Create(
        Setting::kBinary, mu, StatePrior{{1 - p_h, p_h}},
        SignalChannel{{{1 - hl, hl}, {1 - hh, hh}}},
        {{testing::RandomUtility(rng, AgentTag::kContingent), 1.0}});
    const SincereVerdict sv = SincereDichotomy(f, t);
    const SymmetricVerdict cv =
        ClassifySymmetric(sv.group_results.front().strategy, f);
    if (sv.verdict != cv.verdict) ++mismatches;
  }
  o.Require(mismatches == 0, "dichotomy grid");
  o.detail << "three strategies and eight utilities match; " << mismatches
           << " grid mismatches of 1000";
}

void MonteCarlo(Outcome& o) {
  const Instance inst = PolicyFamily().Materialize(20);
  const Profile p = SymmetricProfile(inst, Strategy::Informative(2));
  const double exact = Analyze(p, inst).fidelity;
  o.detail.precision(8);
  o.detail << "exact " << exact;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const MonteCarloEstimate mc = MonteCarloFidelity(p, inst, 1000000, seed);
    const double z = std::abs(mc.fidelity - exact) / mc.std_error;
    o.Require(z <= 4.0, "seed " + std::to_string(seed));
    o.detail << "; seed " << seed << " z=" << z;
  }
}

struct Criterion {
  int id;
  std::function<void(Outcome&)> run;
  double limit_ms;
};

}  // namespace
}  // namespace stratvote

int main() {
  using namespace stratvote;
  const std::vector<Criterion> criteria = {
      {1, TableAndCycle, 1000},      {2, ExcessShares, 10},
      {3, HandConstruction, 1000},   {4, HoeffdingSoundness, 60000},
      {5, OracleEquivalence, 30000}, {6, AccuracyTrends, 10000},
      {7, Refutation, 60000},        {8, SincereTaxonomy, 60000},
      {9, MonteCarlo, 60000},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.misses += std::string(" [exception: ") + e.what() + "]";
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    if (ms > c.limit_ms) {
      o.pass = false;
      o.misses += " [over time limit " + std::to_string(c.limit_ms) + " ms]";
    }
    std::printf("CRITERION %d: %s (%.1f ms) %s%s\n", c.id,
                o.pass ? "PASS" : "FAIL", ms, o.detail.str().c_str(),
                o.misses.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
