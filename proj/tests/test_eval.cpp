#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cobev/error.hpp"
#include "cobev/eval.hpp"
#include "oracles.hpp"

using namespace cobev;

TEST_CASE("top-k counting") {
  const std::vector<int> ranking{0, 1, 2, 3};
  const std::vector<bool> hits{false, true, true, false};
  CHECK(topk_collision(ranking, hits, 1, TopKMode::fraction) == 0.0);
  CHECK(topk_collision(ranking, hits, 2, TopKMode::fraction) == 0.5);
  CHECK(topk_collision(ranking, hits, 4, TopKMode::fraction) == 0.5);
  CHECK(topk_collision(ranking, hits, 2, TopKMode::any) == 1.0);
  CHECK(topk_collision(ranking, hits, 1, TopKMode::any) == 0.0);
  CHECK_THROWS_AS(topk_collision(ranking, hits, 0, TopKMode::fraction), Error);

  std::vector<ScenarioRecord> records(4);
  for (std::size_t i = 0; i < 4; ++i) {
    records[i].round.ranking = {0, 1};
    records[i].collisions = {i == 0, false};
  }
  CHECK(topk_rate_pct(records, 1, TopKMode::fraction) == 25.0);
  for (auto& r : records) r.collisions = {true, true};
  CHECK(topk_rate_pct(records, 1, TopKMode::fraction) == 100.0);
  CHECK(topk_rate_pct(records, 2, TopKMode::fraction) == 100.0);
  CHECK_THROWS_AS(topk_rate_pct({}, 1, TopKMode::fraction), Error);
}

TEST_CASE("policy names round trip") {
  for (auto p : {PolicyName::ego, PolicyName::rand_traj, PolicyName::rand, PolicyName::ego_all,
                 PolicyName::ego_concern, PolicyName::ego_concern_uncertainty,
                 PolicyName::ego_star}) {
    CHECK(parse_policy_name(to_string(p)) == p);
  }
  CHECK(to_string(PolicyName::rand_traj) == "randTraj");
  CHECK_THROWS_AS(parse_policy_name("nope"), Error);
}

TEST_CASE("random_ranking is a reproducible permutation") {
  const auto a = random_ranking(64, 3);
  CHECK(a == random_ranking(64, 3));
  CHECK(a != random_ranking(64, 4));
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ids(64);
  std::iota(ids.begin(), ids.end(), 0);
  CHECK(sorted == ids);
}

TEST_CASE("randTraj top-1 rate matches the colliding fraction within 3 sigma") {
  std::vector<bool> hits(64, false);
  for (int i = 0; i < 20; ++i) hits[static_cast<std::size_t>(i * 3)] = true;
  const double p = 20.0 / 64.0;
  const int trials = 4000;
  int first_hits = 0;
  std::vector<int> position_counts(64, 0);
  for (int s = 0; s < trials; ++s) {
    const auto r = random_ranking(64, mix_seed(77, static_cast<std::uint64_t>(s)));
    first_hits += hits[static_cast<std::size_t>(r[0])];
    ++position_counts[static_cast<std::size_t>(r[0])];
  }
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(first_hits / double(trials) - p) <= 3 * sigma);
  // Every candidate reaches the top: 4000 draws over 64 ids.
  CHECK(*std::min_element(position_counts.begin(), position_counts.end()) > 0);
}

TEST_CASE("evaluate: labels are policy-independent, definitions are consistent") {
  const auto scns = oracle::synthetic_scenarios(61, 4);
  std::vector<PolicySpec> policies;
  for (auto name : {PolicyName::ego, PolicyName::rand_traj, PolicyName::rand,
                    PolicyName::ego_all, PolicyName::ego_concern,
                    PolicyName::ego_concern_uncertainty, PolicyName::ego_star}) {
    policies.push_back(make_policy(name, 2, 5));
  }
  const auto results = evaluate_all(scns, policies, {1, 10});
  REQUIRE(results.size() == policies.size());
  for (const auto& r : results) {
    REQUIRE(r.records.size() == scns.size());
    double rank0 = 0.0;
    for (std::size_t i = 0; i < scns.size(); ++i) {
      CHECK(r.records[i].scenario_id == scns[i].id);
      CHECK(r.records[i].collisions == results.front().records[i].collisions);
      rank0 += r.records[i].collisions[static_cast<std::size_t>(r.records[i].round.ranking[0])];
    }
    CHECK(r.rate_pct.at(1) == doctest::Approx(100.0 * rank0 / scns.size()));
    for (int k : {1, 10}) {
      CHECK(r.rate_pct.at(k) >= 0.0);
      CHECK(r.rate_pct.at(k) <= 100.0);
    }
  }
  const auto& ego = results.front();
  for (int k : {1, 10}) {
    if (ego.rate_pct.at(k) > 0) {
      CHECK(ego.rel_to_ego_pct.at(k) == 100.0);
    } else {
      CHECK(std::isnan(ego.rel_to_ego_pct.at(k)));
    }
  }
  CHECK(ego.avg_links == 0.0);
  CHECK(results[3].avg_links == 2.0);  // ego_all with two supporters available
  CHECK(results[2].avg_links == 1.0);  // rand
  CHECK_THROWS_AS(evaluate_all({}, policies, {1}), Error);
}

TEST_CASE("evaluate_all is independent of the number of workers") {
  const auto scns = oracle::synthetic_scenarios(62, 5);
  const std::vector<PolicySpec> policies{make_policy(PolicyName::ego_concern, 3, 1),
                                         make_policy(PolicyName::rand, 3, 1)};
  EvalOptions one, many;
  many.jobs = 3;
  const auto a = evaluate_all(scns, policies, {1, 10}, one);
  const auto b = evaluate_all(scns, policies, {1, 10}, many);
  for (std::size_t p = 0; p < a.size(); ++p) {
    CHECK(a[p].rate_pct == b[p].rate_pct);
    CHECK(a[p].avg_bytes == b[p].avg_bytes);
    for (std::size_t i = 0; i < scns.size(); ++i) {
      CHECK(a[p].records[i].round.ranking == b[p].records[i].round.ranking);
      CHECK(a[p].records[i].round.fused == b[p].records[i].round.fused);
    }
  }
}
