#include "cobev/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cobev/error.hpp"
#include "cobev/parallel.hpp"

namespace cobev {

namespace {

const std::pair<PolicyName, const char*> kPolicyNames[] = {
    {PolicyName::ego, "ego"},
    {PolicyName::rand_traj, "randTraj"},
    {PolicyName::rand, "rand"},
    {PolicyName::ego_all, "ego_all"},
    {PolicyName::ego_concern, "ego_concern"},
    {PolicyName::ego_concern_uncertainty, "ego_concern_uncertainty"},
    {PolicyName::ego_star, "ego_star"},
};

}  // namespace

std::string to_string(PolicyName name) {
  for (const auto& [n, s] : kPolicyNames) {
    if (n == name) return s;
  }
  throw Error("unknown policy");
}

PolicyName parse_policy_name(const std::string& text) {
  for (const auto& [n, s] : kPolicyNames) {
    if (text == s) return n;
  }
  throw Error("unknown policy '" + text + "'");
}

std::string to_string(TopKMode mode) { return mode == TopKMode::fraction ? "fraction" : "any"; }

TopKMode parse_topk_mode(const std::string& text) {
  if (text == "fraction") return TopKMode::fraction;
  if (text == "any") return TopKMode::any;
  throw Error("unknown top-k mode '" + text + "'");
}

PolicySpec make_policy(PolicyName name, int n_available, std::uint64_t seed,
                       SelectionPolicy selection, double threshold) {
  PolicySpec p;
  p.name = name;
  p.seed = seed;
  p.cfg.n_available = n_available;
  p.cfg.policy = selection;
  p.cfg.threshold = threshold;
  switch (name) {
    case PolicyName::ego:
    case PolicyName::rand_traj:
    case PolicyName::ego_star:
      p.cfg.mode = FusionMode::ego_only;
      break;
    case PolicyName::rand:
      p.cfg.mode = FusionMode::selective;
      p.cfg.policy = SelectionPolicy::random;
      break;
    case PolicyName::ego_all:
      p.cfg.mode = FusionMode::naive_all;
      break;
    case PolicyName::ego_concern:
      p.cfg.mode = FusionMode::selective;
      break;
    case PolicyName::ego_concern_uncertainty:
      p.cfg.mode = FusionMode::uncertainty;
      break;
  }
  p.cfg.validate();
  return p;
}

double topk_collision(const std::vector<int>& ranking, const std::vector<bool>& collisions, int k,
                      TopKMode mode) {
  if (k < 1) throw Error("top-k: k must be >= 1");
  const std::size_t n = std::min(static_cast<std::size_t>(k), ranking.size());
  if (n == 0) throw Error("top-k: empty ranking");
  std::size_t hits = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (collisions.at(static_cast<std::size_t>(ranking[r]))) ++hits;
  }
  if (mode == TopKMode::any) return hits > 0 ? 1.0 : 0.0;
  return static_cast<double>(hits) / static_cast<double>(n);
}

double topk_rate_pct(const std::vector<ScenarioRecord>& records, int k, TopKMode mode) {
  if (records.empty()) throw Error("evaluate: empty scenario list");
  double sum = 0.0;
  for (const auto& r : records) sum += topk_collision(r.round.ranking, r.collisions, k, mode);
  return 100.0 * sum / static_cast<double>(records.size());
}

std::vector<int> random_ranking(std::size_t n, std::uint64_t seed) {
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(seed);
  // Explicit Fisher-Yates; std::shuffle's algorithm is implementation-defined.
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(ids[i - 1], ids[pick(rng)]);
  }
  return ids;
}

namespace {

std::vector<ScenarioRecord> run_scenario(const Scenario& scn,
                                         const std::vector<PolicySpec>& policies,
                                         const EvalOptions& opts,
                                         const std::shared_ptr<const Forecaster>& forecaster,
                                         const std::shared_ptr<const Forecaster>& omniscient) {
  const CandidateSet cands = scenario_candidates(scn, opts.candidates);
  const std::vector<bool> collisions = candidate_collisions(scn, cands);
  AgentViewCache views(scn, forecaster, opts.round);
  std::unique_ptr<AgentViewCache> star_views;

  std::vector<ScenarioRecord> out;
  out.reserve(policies.size());
  for (const auto& p : policies) {
    ScenarioRecord rec;
    rec.scenario_id = scn.id;
    rec.collisions = collisions;
    FusionConfig cfg = p.cfg;
    cfg.seed = mix_seed(p.seed, static_cast<std::uint64_t>(scn.id));
    if (p.name == PolicyName::rand_traj) {
      rec.round.cfg = cfg;
      rec.round.ranking = random_ranking(cands.size(), cfg.seed);
      rec.round.fused.assign(cands.size(), 0.0);
    } else if (p.name == PolicyName::ego_star) {
      if (!star_views) star_views = std::make_unique<AgentViewCache>(scn, omniscient, opts.round);
      rec.round = run_round(scn, cands, *star_views, cfg);
    } else {
      rec.round = run_round(scn, cands, views, cfg);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<EvalResult> evaluate_all(const std::vector<Scenario>& scenarios,
                                     const std::vector<PolicySpec>& policies,
                                     const std::vector<int>& k_values, const EvalOptions& opts) {
  if (scenarios.empty()) throw Error("evaluate: empty scenario list");
  if (k_values.empty()) throw Error("evaluate: no k values");
  for (int k : k_values) {
    if (k < 1) throw Error("evaluate: k must be >= 1");
  }
  const auto forecaster = opts.forecaster ? opts.forecaster
                                          : std::make_shared<const OracleForecaster>(opts.sensor);
  const auto omniscient = std::make_shared<const OmniscientForecaster>();

  // The ego reference for rel_to_ego rides along as an extra policy.
  std::vector<PolicySpec> all = policies;
  all.push_back(make_policy(PolicyName::ego, 0, 0));

  std::vector<std::vector<ScenarioRecord>> per_scenario(scenarios.size());
  parallel_for(scenarios.size(), opts.jobs, [&](std::size_t i) {
    per_scenario[i] = run_scenario(scenarios[i], all, opts, forecaster, omniscient);
  });

  std::vector<std::size_t> order(scenarios.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scenarios[a].id < scenarios[b].id; });

  std::vector<EvalResult> results(all.size());
  for (std::size_t p = 0; p < all.size(); ++p) {
    EvalResult& r = results[p];
    r.policy = all[p];
    r.mode = opts.mode;
    r.k_values = k_values;
    double links = 0.0, bytes = 0.0;
    for (std::size_t i : order) {
      links += per_scenario[i][p].round.links_used;
      bytes += static_cast<double>(per_scenario[i][p].round.bytes_sent);
      r.records.push_back(std::move(per_scenario[i][p]));
    }
    r.avg_links = links / static_cast<double>(scenarios.size());
    r.avg_bytes = bytes / static_cast<double>(scenarios.size());
    for (int k : k_values) r.rate_pct[k] = topk_rate_pct(r.records, k, opts.mode);
  }
  const EvalResult& ego = results.back();
  for (auto& r : results) {
    for (int k : k_values) {
      const double base = ego.rate_pct.at(k);
      r.rel_to_ego_pct[k] = base > 0.0 ? 100.0 * r.rate_pct.at(k) / base
                                       : std::numeric_limits<double>::quiet_NaN();
    }
  }
  results.pop_back();
  return results;
}

EvalResult evaluate(const std::vector<Scenario>& scenarios, const PolicySpec& policy,
                    const std::vector<int>& k_values, const EvalOptions& opts) {
  return evaluate_all(scenarios, {policy}, k_values, opts).front();
}

}  // namespace cobev
