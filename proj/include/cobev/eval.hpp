#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cobev/protocol.hpp"

namespace cobev {

enum class PolicyName : std::uint8_t {
  ego,
  rand_traj,
  rand,
  ego_all,
  ego_concern,
  ego_concern_uncertainty,
  ego_star
};

std::string to_string(PolicyName name);
PolicyName parse_policy_name(const std::string& text);

struct PolicySpec {
  PolicyName name = PolicyName::ego;
  FusionConfig cfg;
  std::uint64_t seed = 0;
};

/// Baseline wiring: ego/ego_star/randTraj never communicate, rand fuses one
/// random supporter, ego_all fuses everybody, the concern variants select by
/// `selection` (above_ego by default).
PolicySpec make_policy(PolicyName name, int n_available, std::uint64_t seed,
                       SelectionPolicy selection = SelectionPolicy::above_ego,
                       double threshold = 0.0);

enum class TopKMode : std::uint8_t { fraction, any };
std::string to_string(TopKMode mode);
TopKMode parse_topk_mode(const std::string& text);

struct ScenarioRecord {
  int scenario_id = 0;
  std::vector<bool> collisions;  // ground truth per candidate
  RoundLog round;
};

struct EvalResult {
  PolicySpec policy;
  TopKMode mode = TopKMode::fraction;
  std::vector<int> k_values;
  std::vector<ScenarioRecord> records;  // ordered by scenario id
  std::map<int, double> rate_pct;
  std::map<int, double> rel_to_ego_pct;  // NaN when the ego rate is zero
  double avg_links = 0.0;
  double avg_bytes = 0.0;
};

/// Share of colliding candidates among the first k of `ranking` (fraction
/// mode), or 1 if any of them collides (any mode).
double topk_collision(const std::vector<int>& ranking, const std::vector<bool>& collisions, int k,
                      TopKMode mode);

double topk_rate_pct(const std::vector<ScenarioRecord>& records, int k, TopKMode mode);

struct EvalOptions {
  CandidateConfig candidates;
  RoundOptions round;
  std::shared_ptr<const Forecaster> forecaster;  // oracle when null
  SensorConfig sensor;                           // for the default oracle
  TopKMode mode = TopKMode::fraction;
  int jobs = 1;
};

/// Runs every policy on every scenario. Scenarios are independent jobs spread
/// over `jobs` threads; agent views are shared between policies of the same
/// scenario. rel_to_ego is taken against an ego run on the same scenarios.
std::vector<EvalResult> evaluate_all(const std::vector<Scenario>& scenarios,
                                     const std::vector<PolicySpec>& policies,
                                     const std::vector<int>& k_values,
                                     const EvalOptions& opts = {});

EvalResult evaluate(const std::vector<Scenario>& scenarios, const PolicySpec& policy,
                    const std::vector<int>& k_values, const EvalOptions& opts = {});

/// Seeded uniform permutation of candidate ids (randTraj).
std::vector<int> random_ranking(std::size_t n, std::uint64_t seed);

}  // namespace cobev
