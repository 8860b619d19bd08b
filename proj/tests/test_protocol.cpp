#include <doctest.h>

#include <memory>
#include <random>

#include "cobev/error.hpp"
#include "cobev/protocol.hpp"
#include "oracles.hpp"

using namespace cobev;

namespace {

std::vector<TrajectoryStats> scores(std::initializer_list<double> s) {
  std::vector<TrajectoryStats> out;
  for (double v : s) out.push_back({v, 0, 0, 0, 0});
  return out;
}

// Reference ordering: repeated selection of the best remaining candidate,
// earliest id on ties.
std::vector<int> selection_order(const std::vector<double>& v) {
  std::vector<int> order;
  std::vector<bool> used(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) {
    int best = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!used[i] && (best < 0 || v[i] > v[best])) best = static_cast<int>(i);
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

}  // namespace

TEST_CASE("uncertainty weight examples") {
  CHECK(uncertainty_weight({0, 0, 0, 0, 0}) == 1.0);
  CHECK(uncertainty_weight({0, 1, 3, 0, 0}) == 8.0);
  CHECK(uncertainty_weight({0, 0, 0, 1, 1}) == 0.25);
}

TEST_CASE("message sizes and bus accounting") {
  CHECK(make_pose_broadcast(1, {}).payload_bytes == 24);
  CHECK(make_concern_reply(2, 1, 0.5).payload_bytes == 8);
  CHECK(make_score_request(1, 2).payload_bytes == 0);
  CHECK(make_score_reply(2, 1, scores({1, 2, 3})).payload_bytes == 120);

  MessageBus bus;
  for (ActorId id : {1, 2, 3}) bus.register_agent(id);
  bus.send(make_pose_broadcast(1, {1, 2, 3}));
  bus.send(make_concern_reply(2, 1, 0.5));
  bus.send(make_concern_reply(3, 1, 0.7));
  CHECK(bus.bytes_sent() == 40);
  CHECK(bus.trace().size() == 3);
  const auto first = bus.receive(1);
  CHECK(first->kind == MessageKind::concern_reply);
  CHECK(first->sender == 2);
  CHECK(bus.receive(2)->kind == MessageKind::pose_broadcast);
  CHECK(bus.receive(3)->kind == MessageKind::pose_broadcast);
  CHECK_FALSE(bus.receive(2).has_value());
  const auto second = bus.receive(1);
  CHECK(second->sender == 3);
  CHECK(std::get<double>(second->payload) == 0.7);
}

TEST_CASE("select_supporters policies") {
  const std::map<ActorId, double> w{{2, 1.0}, {3, 3.0}, {4, 3.0}, {5, 0.2}};
  CHECK(select_supporters(0.5, w, SelectionPolicy::above_ego, 4) == std::vector<ActorId>{2, 3, 4});
  CHECK(select_supporters(0.5, w, SelectionPolicy::top1, 4) == std::vector<ActorId>{3});
  CHECK(select_supporters(5.0, w, SelectionPolicy::top1, 4).empty());
  CHECK(select_supporters(9.0, w, SelectionPolicy::threshold, 4, 0.5) ==
        std::vector<ActorId>{2, 3, 4});
  CHECK(select_supporters(0.0, {}, SelectionPolicy::above_ego, 3).empty());
  CHECK_THROWS_AS(select_supporters(0.0, w, SelectionPolicy::above_ego, 2), Error);
}

TEST_CASE("fusion modes") {
  const auto ego = scores({1, 2, 3});
  const std::map<ActorId, std::vector<TrajectoryStats>> sup{{7, scores({3, -5, 0})}};
  FusionConfig cfg;
  CHECK(fuse(ego, sup, cfg) == std::vector<double>{1, 2, 3});
  cfg.mode = FusionMode::naive_all;
  CHECK(fuse(ego, sup, cfg) == std::vector<double>{4, -3, 3});
  cfg.mode = FusionMode::selective;
  CHECK(fuse(ego, sup, cfg) == std::vector<double>{4, -3, 3});
  cfg.mode = FusionMode::uncertainty;
  CHECK(fuse(ego, sup, cfg) == std::vector<double>{4, -3, 3});  // u = 1 everywhere

  auto weighted = sup;
  weighted[7][1] = {-5, 1, 3, 0, 0};  // u = 8
  weighted[7][2] = {2, 0, 0, 1, 1};   // u = 0.25
  CHECK(fuse(ego, weighted, cfg) == std::vector<double>{4, 2 - 40, 3 + 0.5});
  CHECK_THROWS_AS(fuse(ego, {{7, scores({1})}}, cfg), Error);
}

TEST_CASE("an empty supporter set reproduces ego_only in every mode") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-10, 10), p(0, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TrajectoryStats> ego(64);
    for (auto& s : ego) s = {u(rng), p(rng) / 5, p(rng), p(rng), p(rng)};
    const auto base = prioritize(fuse(ego, {}, FusionConfig{}));
    for (auto mode : {FusionMode::naive_all, FusionMode::selective, FusionMode::uncertainty}) {
      FusionConfig cfg;
      cfg.mode = mode;
      CHECK(prioritize(fuse(ego, {}, cfg)) == base);
    }
  }
}

TEST_CASE("prioritize is a stable descending sort") {
  std::mt19937_64 rng(52);
  std::uniform_int_distribution<int> v(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> f(20);
    for (auto& x : f) x = v(rng);
    CHECK(prioritize(f) == selection_order(f));
  }
  CHECK(prioritize({1, 5, 5, 2}) == std::vector<int>{1, 2, 3, 0});
}

TEST_CASE("concern sums occupancy confidence") {
  std::vector<TrajectoryStats> s{{0, 0, 1.5, 0, 0}, {0, 0, 2.0, 0, 0}};
  CHECK(concern(s) == 3.5);
  CHECK(concern({}) == 0.0);
}

TEST_CASE("transform_candidates maps ego-frame poses into another agent's frame") {
  CandidateSet c;
  c.candidates = {{{1, 0, 0}, {2, 1, 0.5}}};
  const Pose2 ego{10, 5, M_PI / 2}, other{10, 0, 0};
  const auto moved = transform_candidates(c, ego, other);
  CHECK(moved[0][0].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(moved[0][0].y == doctest::Approx(6.0));
  CHECK(moved[0][1].x == doctest::Approx(-1.0));
  CHECK(moved[0][1].y == doctest::Approx(7.0));
  CHECK(moved[0][1].theta == doctest::Approx(M_PI / 2 + 0.5));
}

TEST_CASE("a round on the hidden pedestrian scene") {
  const Scenario scn = oracle::hidden_pedestrian_scene();
  const CandidateSet cands = scenario_candidates(scn);
  auto forecaster = std::make_shared<const OracleForecaster>();
  AgentViewCache views(scn, forecaster);

  FusionConfig solo;
  const RoundLog alone = run_round(scn, cands, views, solo);
  CHECK(alone.links_used == 0);
  CHECK(alone.bytes_sent == 0);
  CHECK(alone.trace.empty());

  FusionConfig sel;
  sel.mode = FusionMode::selective;
  sel.n_available = 3;
  const RoundLog log = run_round(scn, cands, views, sel);
  CHECK(log.supporters == std::vector<ActorId>{4});
  REQUIRE(log.concerns.contains(4));
  CHECK(log.concerns.at(4) > log.concerns.at(1));
  CHECK(log.selected == std::vector<ActorId>{4});
  CHECK(log.links_used == 1);
  CHECK(log.bytes_sent == 24 + 8 + 0 + 40 * cands.size());
  REQUIRE(log.trace.size() == 4);
  CHECK(log.trace[0].kind == MessageKind::pose_broadcast);
  CHECK(log.trace[1].kind == MessageKind::concern_reply);
  CHECK(log.trace[2].kind == MessageKind::score_request);
  CHECK(log.trace[3].kind == MessageKind::score_reply);

  FusionConfig none = sel;
  none.n_available = 0;
  for (auto mode : {FusionMode::naive_all, FusionMode::selective, FusionMode::uncertainty}) {
    none.mode = mode;
    const RoundLog r = run_round(scn, cands, views, none);
    CHECK(r.ranking == alone.ranking);
    CHECK(r.links_used == 0);
  }

  // Memoized scores equal a fresh computation.
  const auto& ego = scn.ego_now();
  const auto fresh = score_candidates(build_agent_view(scn, 4, *forecaster), cands, ego.pose,
                                      ego.footprint);
  CHECK(views.scores(4, cands, ego.pose, ego.footprint) == fresh);
  const Pose2 moved{ego.pose.x + 1.0, ego.pose.y, ego.pose.theta};
  CHECK(views.scores(4, cands, moved, ego.footprint) ==
        score_candidates(build_agent_view(scn, 4, *forecaster), cands, moved, ego.footprint));
}

TEST_CASE("supporter views do not contain the ego") {
  const Scenario scn = oracle::hidden_pedestrian_scene();
  const AgentView v = build_agent_view(scn, 4, OracleForecaster{});
  const auto c = *v.masks.spec.cell_of_world({0.0, 0.0});
  CHECK(v.masks.plane(0)[v.masks.spec.index(c.row, c.col)] != CellClass::occupied);
  const AgentView raw = build_agent_view_raw(scn, 4, OracleForecaster{});
  CHECK(raw.masks.plane(0)[raw.masks.spec.index(c.row, c.col)] == CellClass::occupied);
}
