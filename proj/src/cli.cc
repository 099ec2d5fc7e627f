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

#include "stratvote/cli.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "stratvote/analysis.h"
#include "stratvote/exactprob.h"
#include "stratvote/io.h"
#include "stratvote/reference_games.h"
#include "stratvote/strategize.h"

namespace stratvote {
namespace {

using nlohmann::json;

struct Options {
  std::string command;
  std::optional<std::string> config;
  std::optional<std::string> instance;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<std::string> ns;
  std::optional<std::string> epsilon;
  std::optional<double> tie_break;
  std::optional<std::string> only;
  std::optional<std::string> profile;
  std::optional<std::string> strategy;
  std::optional<std::string> expected;
  std::optional<int> dp_cap;
  std::optional<double> kappa;
  std::optional<double> delta_l;
  std::optional<double> boost;
  std::optional<double> resolution;
  std::optional<double> eta;
  std::optional<double> psi;
  json search;  // DeviationSearchSpec fields from --config
};

// Fills options the command line left unset from the --config document.
void MergeConfig(Options& o) {
  if (!o.config) return;
  json doc;
  try {
    doc = json::parse(ReadFile(*o.config));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                "config " + *o.config + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParseError, "config must be a JSON object");
  }
  auto fill = [&](auto& slot, const char* key) {
    using T = typename std::decay_t<decltype(slot)>::value_type;
    if (slot || !doc.contains(key)) return;
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        const json& v = doc[key];
        slot = v.is_string() ? v.get<std::string>() : v.dump();
      } else {
        slot = doc[key].get<T>();
      }
    } catch (const json::exception&) {
      throw Error(ErrorCode::kParseError,
                  std::string("config field '") + key + "' has the wrong type");
    }
  };
  fill(o.instance, "instance");
  fill(o.out, "out");
  fill(o.seed, "seed");
  fill(o.samples, "samples");
  fill(o.epsilon, "epsilon");
  fill(o.tie_break, "tie_break");
  fill(o.only, "only");
  fill(o.profile, "profile");
  fill(o.strategy, "strategy");
  fill(o.expected, "expected");
  fill(o.dp_cap, "dp_cap");
  fill(o.kappa, "kappa");
  fill(o.delta_l, "delta_l");
  fill(o.boost, "boost");
  fill(o.resolution, "resolution");
  fill(o.eta, "eta");
  fill(o.psi, "psi");
  if (!o.ns && doc.contains("ns")) {
    const json& v = doc["ns"];
    if (v.is_string()) {
      o.ns = v.get<std::string>();
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) {
        if (!x.is_number_integer()) {
          throw Error(ErrorCode::kParseError, "config field 'ns' entries");
        }
        joined += (joined.empty() ? "" : ",") + std::to_string(x.get<int>());
      }
      o.ns = joined;
    } else {
      throw Error(ErrorCode::kParseError, "config field 'ns' has the wrong type");
    }
  }
  if (doc.contains("search")) o.search = doc["search"];
}

ConstructionOptions MakeConstruction(const Options& o) {
  ConstructionOptions c;
  if (o.kappa) c.kappa = *o.kappa;
  c.delta_l = o.delta_l;
  c.boost = o.boost;
  return c;
}

DeviationSearchSpec MakeSearch(const Options& o) {
  DeviationSearchSpec s;
  s.construction = MakeConstruction(o);
  const json& j = o.search;
  try {
    if (j.is_object()) {
      s.resolution = j.value("resolution", s.resolution);
      s.sigma_prime = j.value("sigma_prime", s.sigma_prime);
      s.coalition_grid = j.value("coalition_grid", s.coalition_grid);
      s.single_agents = j.value("single_agents", s.single_agents);
      s.nonbinary_grid = j.value("nonbinary_grid", s.nonbinary_grid);
      for (const auto& c : j.value("candidates", json::array())) {
        DeviationCandidate cand;
        cand.coalition = c.at("coalition").get<std::vector<int>>();
        for (const auto& st : c.at("strategies")) {
          cand.strategies.push_back(Strategy{st.get<std::vector<double>>()});
        }
        cand.label = c.value("label", std::string("explicit"));
        s.candidates.push_back(std::move(cand));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("config 'search': ") + e.what());
  }
  if (o.resolution) s.resolution = *o.resolution;
  return s;
}

Instance RequireInstance(const Options& o) {
  if (!o.instance) throw Error(ErrorCode::kUsage, "--instance is required");
  return LoadInstance(*o.instance);
}

std::string ProfileName(const Options& o) {
  return o.profile.value_or("informative");
}

// The strategy contingent agents play, for profiles that have one.
std::optional<Strategy> ContingentStrategy(const Options& o,
                                          const Instance& instance) {
  const std::string name = ProfileName(o);
  if (name == "informative") return Strategy::Informative(instance.num_signals());
  if (name == "constructed") {
    const ConstructionOptions c = MakeConstruction(o);
    return instance.family() ? ConstructSigmaPrime(*instance.family(), c).sigma_prime
                             : ConstructSigmaPrime(instance, c).sigma_prime;
  }
  if (name == "explicit") {
    if (!o.strategy) {
      throw Error(ErrorCode::kUsage, "--profile explicit needs --strategy");
    }
    Strategy s = ParseStrategy(*o.strategy);
    if (s.num_signals() != instance.num_signals()) {
      throw Error(ErrorCode::kUsage, "--strategy length != signal count");
    }
    return s;
  }
  return std::nullopt;
}

Profile MakeProfile(const Options& o, const Instance& instance) {
  const std::string name = ProfileName(o);
  if (name == "all-informative") {
    return SymmetricProfile(instance, Strategy::Informative(instance.num_signals()));
  }
  if (name == "sincere") return SincereProfile(instance, o.tie_break.value_or(0.5));
  if (auto s = ContingentStrategy(o, instance)) return RegularProfile(instance, *s);
  throw Error(ErrorCode::kUsage,
              "unknown --profile '" + name +
                  "' (informative, all-informative, sincere, constructed, "
                  "explicit)");
}

json ExcessJson(const ExcessShare& e) {
  return {{"accept", e.accept},
          {"reject", e.reject},
          {"min_relevant", e.min_relevant},
          {"argmin_state", e.argmin_state + 1}};
}

json StrategyJson(const Strategy& s) { return s.vote_probs; }

json InstanceSummary(const Instance& instance) {
  json majority = json::array();
  for (int s = 0; s < instance.num_states(); ++s) {
    majority.push_back(AlternativeName(instance.InformedMajority(s)));
  }
  return {{"setting", SettingName(instance.setting())},
          {"n", instance.n()},
          {"mu", instance.mu()},
          {"winning_count", instance.winning_count()},
          {"informed_majority", majority},
          {"type_counts",
           {{"friendly", instance.CountOf(AgentTag::kFriendly)},
            {"unfriendly", instance.CountOf(AgentTag::kUnfriendly)},
            {"contingent", instance.CountOf(AgentTag::kContingent)}}}};
}

double MeanOver(const std::vector<double>& values, const std::vector<int>& idx) {
  if (idx.empty()) return std::nan("");
  double total = 0.0;
  for (int i : idx) total += values[i];
  return total / static_cast<double>(idx.size());
}

json MonteCarloJson(const MonteCarloEstimate& mc, std::uint64_t seed) {
  return {{"fidelity", mc.fidelity},
          {"stderr", mc.std_error},
          {"samples", mc.samples},
          {"seed", seed}};
}

std::string CmdAnalyze(const Options& o) {
  const Instance instance = RequireInstance(o);
  const Profile profile = MakeProfile(o, instance);
  const int cap = o.dp_cap.value_or(5000);
  const std::uint64_t seed = o.seed.value_or(1);
  json doc = {{"command", "analyze"},
              {"instance", InstanceSummary(instance)},
              {"profile", ProfileName(o)}};
  const ExcessShare excess = ComputeExcessShare(profile, instance);
  doc["excess"] = ExcessJson(excess);
  if (excess.min_relevant > 0.0) {
    doc["hoeffding_bound"] = HoeffdingLowerBound(excess.min_relevant, instance.n());
  }
  if (instance.n() <= cap) {
    const AnalysisReport r = Analyze(profile, instance);
    doc["method"] = "exact";
    doc["lambda_accept"] = r.lambda_accept;
    doc["lambda_reject"] = r.lambda_reject;
    doc["fidelity"] = r.fidelity;
    doc["error_rate"] = r.error_rate;
    doc["expected_utilities"] = r.expected_utilities;
    json by_type = json::object();
    for (AgentTag tag : {AgentTag::kFriendly, AgentTag::kUnfriendly,
                         AgentTag::kContingent}) {
      const double m = MeanOver(r.expected_utilities, instance.AgentsOf(tag));
      by_type[AgentTagName(tag)] = std::isnan(m) ? json(nullptr) : json(m);
    }
    doc["expected_utility_by_type"] = by_type;
    doc["epsilon_bound"] = EpsilonBound(r.fidelity, instance.utility_bound(),
                                        instance.num_states());
    if (o.samples) {
      doc["monte_carlo"] = MonteCarloJson(
          MonteCarloFidelity(profile, instance, *o.samples, seed), seed);
    }
  } else {
    doc["method"] = "montecarlo";
    const MonteCarloEstimate mc =
        MonteCarloFidelity(profile, instance, o.samples.value_or(100000), seed);
    doc["fidelity"] = mc.fidelity;
    doc["monte_carlo"] = MonteCarloJson(mc, seed);
  }
  return doc.dump(2) + "\n";
}

std::string CmdExcess(const Options& o) {
  const Instance instance = RequireInstance(o);
  const Profile profile = MakeProfile(o, instance);
  json doc = {{"command", "excess"},
              {"instance", InstanceSummary(instance)},
              {"profile", ProfileName(o)},
              {"excess", ExcessJson(ComputeExcessShare(profile, instance))}};
  const auto& family = instance.family();
  if (family) {
    if (auto s = ContingentStrategy(o, instance)) {
      const SymmetricVerdict v = ClassifySymmetric(*s, *family);
      doc["symmetric"] = {{"strategy", StrategyJson(*s)},
                          {"verdict", DichotomyName(v.verdict)},
                          {"excess", ExcessJson(v.excess)},
                          {"note", v.note}};
    }
    if (ProfileName(o) == "sincere") {
      const SincereVerdict v = SincereDichotomy(*family, o.tie_break.value_or(0.5));
      doc["sincere"] = {{"verdict", DichotomyName(v.verdict)},
                        {"excess", ExcessJson(v.excess)}};
    }
    if (family->setting() == Setting::kBinary) {
      const InformativeVerdict v = InformativeDichotomy(*family);
      doc["informative"] = {{"verdict", DichotomyName(v.verdict)},
                            {"f_high", v.f_high},
                            {"f_low", v.f_low}};
    }
    if (o.ns) {
      SequenceOptions so;
      if (o.eta) so.eta = *o.eta;
      if (o.psi) so.psi = *o.psi;
      const SequenceVerdict v = ClassifySequence(
          *family, [&](const Instance& inst) { return MakeProfile(o, inst); },
          ParseNs(*o.ns), so);
      doc["sequence"] = {{"verdict", SequenceCaseName(v.verdict)},
                         {"ns", v.ns},
                         {"scaled_excess", v.scaled_excess},
                         {"variance_per_n", v.variance_per_n},
                         {"psi_estimate", v.psi_estimate},
                         {"slope", v.slope},
                         {"intercept", v.intercept},
                         {"note", v.note}};
    }
  }
  return doc.dump(2) + "\n";
}

json TraceJson(const ConstructionTrace& t) {
  return {{"beta_star", t.beta_star},
          {"split_signal", t.split_signal},
          {"delta_l", t.delta_l},
          {"delta_h", t.delta_h},
          {"delta_h_boost", t.delta_h_boost},
          {"sigma_1", StrategyJson(t.sigma_1)},
          {"sigma_prime", StrategyJson(t.sigma_prime)},
          {"shift_sigma_1", t.shift_sigma_1},
          {"shift_sigma_prime", t.shift_prime},
          {"certificates_accept", t.cert_accept},
          {"certificates_reject", t.cert_reject},
          {"min_certificate", t.min_certificate},
          {"phi", t.phi},
          {"n0", t.n0}};
}

std::string CmdConstruct(const Options& o) {
  const Instance instance = RequireInstance(o);
  const ConstructionOptions c = MakeConstruction(o);
  const ConstructionTrace t = instance.family()
                                  ? ConstructSigmaPrime(*instance.family(), c)
                                  : ConstructSigmaPrime(instance, c);
  json doc = {{"command", "construct"},
              {"instance", InstanceSummary(instance)},
              {"trace", TraceJson(t)}};
  return doc.dump(2) + "\n";
}

std::string CmdRefute(const Options& o) {
  const Instance instance = RequireInstance(o);
  const Profile profile = MakeProfile(o, instance);
  const AnalysisReport r = Analyze(profile, instance);
  const std::string eps_text = o.epsilon.value_or("auto");
  double epsilon = 0.0;
  if (eps_text == "auto") {
    epsilon = EpsilonBound(r.fidelity, instance.utility_bound(),
                           instance.num_states());
  } else {
    std::size_t used = 0;
    try {
      epsilon = std::stod(eps_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != eps_text.size() || !(epsilon >= 0.0)) {
      throw Error(ErrorCode::kUsage, "--epsilon must be a number >= 0 or auto");
    }
  }
  const auto finding =
      RefuteEquilibrium(profile, instance, epsilon, MakeSearch(o));
  json doc = {{"command", "refute"},
              {"instance", InstanceSummary(instance)},
              {"profile", ProfileName(o)},
              {"fidelity", r.fidelity},
              {"epsilon", epsilon},
              {"refuted", finding.has_value()}};
  if (finding) {
    json alt = json::array();
    for (int i : finding->coalition) alt.push_back(StrategyJson(finding->alternative[i]));
    doc["finding"] = {{"source", finding->source},
                      {"coalition", finding->coalition},
                      {"strategies", alt},
                      {"gains", finding->gains},
                      {"max_gain", finding->max_gain},
                      {"weak_ok", finding->weak_ok}};
  } else {
    doc["note"] = "no structured deviation found; not a proof of equilibrium";
  }
  return doc.dump(2) + "\n";
}

std::string CmdSweep(const Options& o) {
  const Instance base = RequireInstance(o);
  if (!base.family()) {
    throw Error(ErrorCode::kUsage, "sweep needs a group-specified instance");
  }
  if (!o.ns) throw Error(ErrorCode::kUsage, "sweep needs --ns");
  const std::vector<int> ns = ParseNs(*o.ns);
  const Family& family = *base.family();
  const int cap = o.dp_cap.value_or(5000);
  const std::uint64_t seed = o.seed.value_or(1);
  const std::int64_t samples = o.samples.value_or(100000);
  if (samples < 1) throw Error(ErrorCode::kUsage, "--samples must be >= 1");

  std::vector<std::string> rows(ns.size());
  std::vector<std::exception_ptr> errors(ns.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ns.size(); i = next++) {
      try {
        const int n = ns[i];
        const Instance instance = family.Materialize(n);
        const Profile profile = MakeProfile(o, instance);
        const double f = ComputeExcessShare(profile, instance).min_relevant;
        double fidelity = 0.0;
        double stderr_value = 0.0;
        std::string method;
        double utility = std::nan("");
        if (n <= cap) {
          const AnalysisReport r = Analyze(profile, instance);
          fidelity = r.fidelity;
          method = "exact";
          utility = MeanOver(r.expected_utilities,
                             instance.AgentsOf(AgentTag::kContingent));
        } else {
          const MonteCarloEstimate mc = MonteCarloFidelity(
              profile, instance, samples, seed + static_cast<std::uint64_t>(n));
          fidelity = mc.fidelity;
          stderr_value = mc.std_error;
          method = "montecarlo";
        }
        const double bound = f > 0.0 ? HoeffdingLowerBound(f, n) : std::nan("");
        rows[i] = std::to_string(n) + "," + FormatNumber(f) + "," +
                  FormatNumber(fidelity) + "," + FormatNumber(stderr_value) +
                  "," + method + "," + FormatNumber(bound) + "," +
                  FormatNumber(utility) + "\n";
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(WorkerCount(), static_cast<int>(ns.size()));
  std::vector<std::thread> threads;
  for (int w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::string csv =
      "n,f_min,fidelity,fidelity_stderr,method,hoeffding_bound,"
      "contingent_expected_utility\n";
  for (const auto& r : rows) csv += r;
  return csv;
}

std::string CmdVerify(const Options& o, bool& all_passed) {
  json overrides = json::object();
  if (o.expected) {
    try {
      overrides = json::parse(ReadFile(*o.expected));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParseError,
                  "expected-values file: " + std::string(e.what()));
    }
  }
  const auto checks =
      RunReferenceChecks(overrides, o.only.value_or(""), o.tie_break.value_or(0.3));
  json list = json::array();
  int passed = 0;
  for (const auto& c : checks) {
    json item = {{"id", c.id},
                 {"tags", c.tags},
                 {"kind", c.kind},
                 {"actual", c.actual},
                 {"pass", c.pass}};
    if (c.kind == "value") {
      item["expected"] = c.expected;
      item["tolerance"] = c.tolerance;
    }
    list.push_back(std::move(item));
    passed += c.pass ? 1 : 0;
  }
  const int failed = static_cast<int>(checks.size()) - passed;
  all_passed = failed == 0 && !checks.empty();
  json doc = {{"command", "verify-paper"},
              {"checks", list},
              {"total", checks.size()},
              {"passed", passed},
              {"failed", failed},
              {"all_passed", all_passed}};
  return doc.dump(2) + "\n";
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInstanceTooLarge:
    case ErrorCode::kNonPositiveExcess:
    case ErrorCode::kZeroVariance:
    case ErrorCode::kZeroProbabilitySignal:
    case ErrorCode::kConstructionInfeasible:
      return kExitNumeric;
    default:
      return kExitInput;
  }
}

// ---------------------------------------------------------------------------
// Reference checks.

void AddValue(std::vector<ReferenceCheck>& out, std::string id,
              std::vector<std::string> tags, double expected, double actual,
              double tolerance = 1e-9) {
  out.push_back(ReferenceCheck{std::move(id), std::move(tags), "value", expected,
                           actual, tolerance, false});
}

void AddPositive(std::vector<ReferenceCheck>& out, std::string id,
                 std::vector<std::string> tags, double actual) {
  out.push_back(ReferenceCheck{std::move(id), std::move(tags), "positive", 0.0,
                           actual, 0.0, false});
}

double MinGain(const Profile& from, const Instance& instance,
               const std::vector<int>& coalition, const Profile& to) {
  std::vector<Strategy> strategies;
  for (int i : coalition) strategies.push_back(to[i]);
  const DeviationFinding f =
      EvaluateDeviation(from, instance, {coalition, strategies, ""});
  double lowest = f.gains.front();
  for (double g : f.gains) lowest = std::min(lowest, g);
  return lowest;
}

void NoBneChecks(std::vector<ReferenceCheck>& out) {
  const NoBneGame g = BuildNoBneInstance(1);
  const int agents[3] = {g.friendly.front(), g.contingent.front(),
                         g.unfriendly.front()};
  const char* names[3] = {"friendly", "contingent", "unfriendly"};
  const Profile* profiles[3] = {&g.sigma_1, &g.sigma_2, &g.sigma_3};
  const double table[3][3] = {{50.396, 85.12, 50.396},
                              {66.14, 75.2, 34.46},
                              {50.3, 76.0, 50.3}};
  for (int p = 0; p < 3; ++p) {
    const AnalysisReport r = Analyze(*profiles[p], g.instance);
    for (int a = 0; a < 3; ++a) {
      AddValue(out,
               "appendix-c/sigma" + std::to_string(p + 1) + "/" + names[a],
               {"appendix-c"}, table[p][a], r.expected_utilities[agents[a]]);
    }
  }
  const std::vector<std::string> tag = {"deviation-cycle"};
  AddPositive(out, "deviation-cycle/sigma1-to-sigma2", tag,
              MinGain(g.sigma_1, g.instance, {g.friendly.back()}, g.sigma_2));
  AddPositive(out, "deviation-cycle/sigma2-to-sigma3", tag,
              MinGain(g.sigma_2, g.instance, {g.contingent.back()}, g.sigma_3));
  AddPositive(out, "deviation-cycle/sigma3-to-sigma1", tag,
              MinGain(g.sigma_3, g.instance,
                      {g.friendly.back(), g.contingent.front(),
                       g.contingent.back()},
                      g.sigma_1));
}

void PolicyChecks(std::vector<ReferenceCheck>& out) {
  const Instance inst = PolicyFamily().Materialize(20);
  const std::vector<std::string> tag = {"example-4"};
  AddValue(out, "example-4/friendly-count", tag, 4,
           inst.CountOf(AgentTag::kFriendly));
  AddValue(out, "example-4/unfriendly-count", tag, 6,
           inst.CountOf(AgentTag::kUnfriendly));
  AddValue(out, "example-4/contingent-count", tag, 10,
           inst.CountOf(AgentTag::kContingent));
  AddValue(out, "example-4/majority-accepts-in-H", tag, 1,
           inst.InformedMajority(kStateH) == Alternative::kAccept ? 1 : 0);
  AddValue(out, "example-4/majority-accepts-in-L", tag, 0,
           inst.InformedMajority(kStateL) == Alternative::kAccept ? 1 : 0);
}

void ConstructionChecks(std::vector<ReferenceCheck>& out) {
  ConstructionOptions opts;
  opts.delta_l = 0.3;
  opts.boost = 0.06;
  const ConstructionTrace t = ConstructSigmaPrime(AccuracyFamily(2), opts);
  const std::vector<std::string> tag = {"example-6"};
  AddValue(out, "example-6/sigma1-low", tag, 0.5, t.sigma_1[kSignalLow]);
  AddValue(out, "example-6/sigma1-high", tag, 0.9, t.sigma_1[kSignalHigh]);
  AddValue(out, "example-6/sigma1-shift-H", tag, 0.0, t.shift_sigma_1[kStateH]);
  AddValue(out, "example-6/sigma-prime-low", tag, 0.5, t.sigma_prime[kSignalLow]);
  AddValue(out, "example-6/sigma-prime-high", tag, 0.96,
           t.sigma_prime[kSignalHigh]);
  // 0.75 * 0.16 - 0.25 * 0.3 is 0.045, not the often quoted 0.05.
  AddValue(out, "example-6/shift-H", tag, 0.75 * 0.16 - 0.25 * 0.3,
           t.shift_prime[kStateH]);
  AddValue(out, "example-6/shift-L", tag, -0.208, t.shift_prime[kStateL]);
}

void ExcessChecks(std::vector<ReferenceCheck>& out) {
  const std::vector<std::string> tag = {"example-7"};
  const Strategy informative = Strategy::Informative(2);
  const ExcessShare c1 = ClassifySymmetric(informative, AccuracyFamily(1)).excess;
  const ExcessShare c2 = ClassifySymmetric(informative, AccuracyFamily(2)).excess;
  const ExcessShare c2p =
      ClassifySymmetric(Strategy{{0.48, 0.96}}, AccuracyFamily(2)).excess;
  AddValue(out, "example-7/case1-f-H", tag, 0.05, c1.accept[kStateH]);
  AddValue(out, "example-7/case1-f-L", tag, 0.3, c1.reject[kStateL]);
  AddValue(out, "example-7/case2-f-H", tag, -0.025, c2.accept[kStateH]);
  AddValue(out, "example-7/case2-sigma-prime-f-H", tag, 0.02, c2p.accept[kStateH]);
  AddValue(out, "example-7/case2-sigma-prime-f-L", tag, 0.112,
           c2p.reject[kStateL]);
}

void SincereChecks(std::vector<ReferenceCheck>& out, double tie_break) {
  const std::vector<std::string> tag = {"example-8"};
  const StatePrior prior{{0.5, 0.5}};
  const SignalChannel channel{{{0.8, 0.2}, {0.2, 0.8}}};
  AddValue(out, "example-8/posterior-H-given-h", tag, 0.8,
           Posterior(prior, channel, kSignalHigh)[kStateH]);
  const SincereResult r1 = SincereStrategy(SincereUtility(1), prior, channel, tie_break);
  AddValue(out, "example-8/case1-low", tag, 0.0, r1.strategy[kSignalLow]);
  AddValue(out, "example-8/case1-high", tag, 1.0, r1.strategy[kSignalHigh]);
  const SincereResult r2 = SincereStrategy(SincereUtility(2), prior, channel, tie_break);
  AddValue(out, "example-8/case2-accept-low", tag, 1.8, r2.accept_low);
  AddValue(out, "example-8/case2-reject-low", tag, 1.6, r2.reject_low);
  AddValue(out, "example-8/case2-accept-high", tag, 4.2, r2.accept_high);
  AddValue(out, "example-8/case2-reject-high", tag, 0.4, r2.reject_high);
  AddValue(out, "example-8/case2-low", tag, 1.0, r2.strategy[kSignalLow]);
  AddValue(out, "example-8/case2-high", tag, 1.0, r2.strategy[kSignalHigh]);
  const SincereResult r3 = SincereStrategy(SincereUtility(3), prior, channel, tie_break);
  AddValue(out, "example-8/case3-accept-low", tag, 1.6, r3.accept_low);
  AddValue(out, "example-8/case3-reject-low", tag, 1.6, r3.reject_low);
  AddValue(out, "example-8/case3-accept-high", tag, 3.4, r3.accept_high);
  AddValue(out, "example-8/case3-reject-high", tag, 0.4, r3.reject_high);
  AddValue(out, "example-8/case3-low", tag, tie_break, r3.strategy[kSignalLow]);
  AddValue(out, "example-8/case3-high", tag, 1.0, r3.strategy[kSignalHigh]);
  auto high = [](Dichotomy d) { return d == Dichotomy::kHighFidelity ? 1.0 : 0.0; };
  AddValue(out, "example-8/case1-high-fidelity", tag, 1.0,
           high(SincereDichotomy(SincereFamily(1, 0.5), tie_break).verdict));
  AddValue(out, "example-8/case2-high-fidelity", tag, 0.0,
           high(SincereDichotomy(SincereFamily(2, 0.5), tie_break).verdict));
  AddValue(out, "example-8/case3-high-fidelity", tag, 1.0,
           high(SincereDichotomy(SincereFamily(3, 0.6), 0.2).verdict));
}

void ThreeStateChecks(std::vector<ReferenceCheck>& out) {
  const std::vector<std::string> tag = {"example-9"};
  const Family family = ThreeStateFamily();
  const Instance inst = family.Materialize(20);
  const double expected_accept[3] = {0, 0, 1};
  for (int s = 0; s < 3; ++s) {
    AddValue(out, "example-9/majority-accepts-in-" + std::to_string(s + 1), tag,
             expected_accept[s],
             inst.InformedMajority(s) == Alternative::kAccept ? 1 : 0);
  }
  const AgentTag expected_tags[4] = {AgentTag::kUnfriendly, AgentTag::kContingent,
                                     AgentTag::kFriendly, AgentTag::kFriendly};
  for (int g = 0; g < 4; ++g) {
    AddValue(out,
             "example-9/group" + std::to_string(g + 1) + "-" +
                 AgentTagName(expected_tags[g]),
             tag, 1.0, family.group_types()[g].tag == expected_tags[g] ? 1 : 0);
  }
}

// ---------------------------------------------------------------------------

int Dispatch(Options& o, std::ostream& out, std::ostream& err) {
  try {
    MergeConfig(o);
    std::string text;
    bool verified = true;
    if (o.command == "analyze") {
      text = CmdAnalyze(o);
    } else if (o.command == "excess") {
      text = CmdExcess(o);
    } else if (o.command == "construct") {
      text = CmdConstruct(o);
    } else if (o.command == "refute") {
      text = CmdRefute(o);
    } else if (o.command == "sweep") {
      text = CmdSweep(o);
    } else {
      text = CmdVerify(o, verified);
    }
    if (o.out) {
      WriteOutput(*o.out, text);
    } else {
      out << text;
    }
    return verified ? kExitOk : kExitVerification;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace

std::vector<ReferenceCheck> RunReferenceChecks(const json& overrides,
                                       const std::string& only,
                                       double tie_break) {
  std::vector<ReferenceCheck> all;
  NoBneChecks(all);
  PolicyChecks(all);
  ConstructionChecks(all);
  ExcessChecks(all);
  SincereChecks(all, tie_break);
  ThreeStateChecks(all);

  std::vector<ReferenceCheck> kept;
  for (auto& c : all) {
    if (!only.empty() &&
        std::find(c.tags.begin(), c.tags.end(), only) == c.tags.end()) {
      continue;
    }
    if (overrides.is_object() && overrides.contains(c.id)) {
      const json& v = overrides[c.id];
      if (!v.is_number()) {
        throw Error(ErrorCode::kParseError,
                    "expected value for '" + c.id + "' is not a number");
      }
      c.expected = v.get<double>();
      c.kind = "value";
      if (c.tolerance == 0.0) c.tolerance = 1e-9;
    }
    c.pass = c.kind == "positive"
                 ? c.actual > 0.0
                 : std::abs(c.actual - c.expected) <= c.tolerance;
    kept.push_back(std::move(c));
  }
  return kept;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Exact analysis of strategic voting games", "stratvote"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON config; flags override it");
  app.add_option("--instance", o.instance, "instance JSON");
  app.add_option("--out", o.out, "write the report here instead of stdout");
  app.add_option("--seed", o.seed, "Monte Carlo seed");
  app.add_option("--samples", o.samples, "Monte Carlo samples")
      ->check(CLI::PositiveNumber);
  app.add_option("--ns", o.ns, "N values: a..b:step or a,b,c");
  app.add_option("--epsilon", o.epsilon, "number or auto");
  app.add_option("--tie-break", o.tie_break, "sincere tie vote probability")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--only", o.only, "verify-paper tag filter");
  app.add_option("--profile", o.profile,
                 "informative | all-informative | sincere | constructed | "
                 "explicit");
  app.add_option("--strategy", o.strategy, "contingent strategy, e.g. 0.48,0.96");
  app.add_option("--expected", o.expected, "verify-paper expected-value overrides");
  app.add_option("--dp-cap", o.dp_cap, "largest N solved exactly");
  app.add_option("--kappa", o.kappa, "construction slack fraction");
  app.add_option("--delta-l", o.delta_l, "construction step-2 magnitude");
  app.add_option("--boost", o.boost, "construction step-3 increase");
  app.add_option("--resolution", o.resolution, "deviation grid resolution");
  app.add_option("--eta", o.eta, "sequence screen failure threshold");
  app.add_option("--psi", o.psi, "sequence screen variance floor");

  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "exact win probabilities, fidelity and utilities"},
      {"excess", "excess vote share and dichotomy verdicts"},
      {"construct", "build the high-fidelity contingent strategy"},
      {"refute", "search for a profitable coalition deviation"},
      {"sweep", "fidelity over a range of N as CSV"},
      {"verify-paper", "run the built-in reference value checks"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&o, name = name] {
      o.command = name;
    });
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return Dispatch(o, out, err);
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace stratvote
