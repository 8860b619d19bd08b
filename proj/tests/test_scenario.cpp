#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cobev/error.hpp"
#include "cobev/scenario.hpp"
#include "oracles.hpp"

using namespace cobev;

TEST_CASE("window frame counts") {
  const WindowConfig w;
  CHECK(w.obs_frames(0.1) == 30);
  CHECK(w.plan_frames(0.1) == 10);
}

TEST_CASE("candidates respect the acceleration and yaw-rate limits at every step") {
  const CandidateConfig cfg;
  const double dt = 0.1;
  for (double v0 : {0.0, 3.0, 12.0}) {
    const auto set = generate_candidates(v0, dt, 10, cfg);
    REQUIRE(set.size() == 64);
    for (std::size_t i = 0; i < set.size(); ++i) {
      double v = v0, theta = 0.0;
      for (int t = 0; t < 10; ++t) {
        const double a = (set.speeds[i][t] - v) / dt;
        CHECK(a >= cfg.accel_min - 1e-9);
        CHECK(a <= cfg.accel_max + 1e-9);
        CHECK(set.speeds[i][t] >= 0.0);
        const double w = normalize_angle(set.candidates[i][t].theta - theta) / dt;
        CHECK(w >= cfg.yaw_rate_min - 1e-9);
        CHECK(w <= cfg.yaw_rate_max + 1e-9);
        v = set.speeds[i][t];
        theta = set.candidates[i][t].theta;
      }
    }
  }
}

TEST_CASE("candidate ids enumerate accel major, yaw minor") {
  const auto set = generate_candidates(5.0, 0.1, 10);
  for (int ia = 0; ia < 8; ++ia) {
    for (int iw = 0; iw < 8; ++iw) {
      CHECK(set.accel[ia * 8 + iw] == doctest::Approx(-4.0 + 6.0 * ia / 7));
      CHECK(set.yaw_rate[ia * 8 + iw] == doctest::Approx(-0.5 + 1.0 * iw / 7));
    }
  }
}

TEST_CASE("straight-line candidates follow x = v t + a t^2 / 2 exactly") {
  CandidateConfig cfg;
  cfg.n_yaw_rate = 1;
  cfg.yaw_rate_min = cfg.yaw_rate_max = 0.0;
  const double v0 = 10.0;
  const auto set = generate_candidates(v0, 0.1, 10, cfg);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double a = set.accel[i];
    for (int t = 0; t < 10; ++t) {
      const double time = 0.1 * (t + 1);
      CHECK(std::abs(set.candidates[i][t].x - (v0 * time + 0.5 * a * time * time)) <= 1e-9);
      CHECK(set.candidates[i][t].y == 0.0);
      CHECK(set.candidates[i][t].theta == 0.0);
      CHECK(std::abs(set.speeds[i][t] - (v0 + a * time)) <= 1e-9);
    }
  }
}

TEST_CASE("braking candidates stop and never reverse") {
  CandidateConfig cfg;
  cfg.n_accel = cfg.n_yaw_rate = 1;
  cfg.accel_min = cfg.accel_max = -4.0;
  cfg.yaw_rate_min = cfg.yaw_rate_max = 0.0;
  const auto set = generate_candidates(1.0, 0.1, 10, cfg);
  for (int t = 1; t < 10; ++t) CHECK(set.candidates[0][t].x >= set.candidates[0][t - 1].x);
  CHECK(set.speeds[0].back() == 0.0);
  CHECK(set.candidates[0].back().x == doctest::Approx(1.0 / 8.0).epsilon(1e-9));
  CHECK_THROWS_AS(generate_candidates(-1.0, 0.1, 10), Error);
}

TEST_CASE("slice_scenarios cuts full windows and samples communicating agents") {
  TrackSet tracks;
  for (int k = 0; k < 100; ++k) {
    Frame f;
    for (ActorId id = 1; id <= 6; ++id) {
      f.push_back({id, ActorKind::vehicle, {k * 0.5, id * 5.0, 0}, {4.5, 2.0}, 5.0});
    }
    f.push_back({7, ActorKind::pedestrian, {0, -5, 0}, {0.6, 0.6}, 0.0});
    tracks.frames.push_back(f);
  }
  const auto scns = slice_scenarios(tracks, 40, 9);
  REQUIRE(scns.size() == 2);
  for (const auto& s : scns) {
    CHECK(s.tracks.frame_count() == 40);
    CHECK(s.obs_first == 0);
    CHECK(s.obs_last == 29);
    CHECK(s.plan_first == 30);
    CHECK(s.plan_last == 39);
    CHECK(s.comm_ids.size() == 4);
    CHECK(std::is_sorted(s.comm_ids.begin(), s.comm_ids.end()));
    CHECK(std::find(s.comm_ids.begin(), s.comm_ids.end(), s.ego_id) != s.comm_ids.end());
    CHECK(std::find(s.comm_ids.begin(), s.comm_ids.end(), 7) == s.comm_ids.end());
    CHECK(s.supporters().size() == 3);
  }
  CHECK(scns[1].source_offset == 40);
  CHECK(scns[1].tracks.at(0, 1).pose.x == tracks.at(40, 1).pose.x);
  const auto again = slice_scenarios(tracks, 40, 9);
  CHECK(again[0].comm_ids == scns[0].comm_ids);
  CHECK(again[0].ego_id == scns[0].ego_id);
  CHECK(slice_scenarios(tracks, 10, 9).size() == 7);
}

TEST_CASE("hidden pedestrian crossing the straight candidate is flagged") {
  const Scenario scn = oracle::hidden_pedestrian_scene();
  const CandidateSet cands = scenario_candidates(scn, oracle::straight_candidate());
  REQUIRE(cands.size() == 1);

  // Ground truth from the overlap oracle, step by step.
  const auto world = candidates_in_world(scn, cands);
  int first_contact = -1;
  for (int t = 0; t < scn.horizon() && first_contact < 0; ++t) {
    const auto& ped = scn.tracks.at(scn.plan_first + t, 3);
    if (rectangles_overlap(world[0][t], scn.ego_now().footprint, ped.pose, ped.footprint)) {
      first_contact = t;
    }
  }
  CHECK(first_contact == 4);  // plan step 5

  const auto report = assess_criticality(scn, cands);
  CHECK(report.colliding_count == 1);
  CHECK(report.collides_with_unseen == std::vector<bool>{true});
  CHECK(report.unseen_actor_ids.contains(3));
  CHECK_FALSE(report.unseen_actor_ids.contains(2));
  CHECK(candidate_collisions(scn, cands) == std::vector<bool>{true});

  Scenario peek = scn;
  for (auto& a : peek.tracks.frames[12]) {
    if (a.actor_id == 3) a.pose = {8.0, -4.0, 0};
  }
  const auto seen = assess_criticality(peek, cands);
  CHECK(seen.colliding_count == 0);
  CHECK_FALSE(seen.unseen_actor_ids.contains(3));
  CHECK(candidate_collisions(peek, cands) == std::vector<bool>{true});
}

TEST_CASE("criticality_histogram counts reports per colliding count") {
  std::vector<CriticalityReport> reports(5);
  reports[1].colliding_count = 3;
  reports[2].colliding_count = 3;
  reports[4].colliding_count = 64;
  const auto h = criticality_histogram(reports, 64);
  REQUIRE(h.size() == 65);
  CHECK(h[0] == 2);
  CHECK(h[3] == 2);
  CHECK(h[64] == 1);
  CHECK(std::accumulate(h.begin(), h.end(), std::size_t{0}) == reports.size());
  const auto zero = criticality_histogram(std::vector<CriticalityReport>(4), 64);
  CHECK(zero[0] == 4);
}

TEST_CASE("augment_adversarial keeps recorded tracks and creates a hidden collision") {
  const auto scns = oracle::synthetic_scenarios(31, 12);
  const AugmentContext ctx;
  int succeeded = 0;
  for (const auto& scn : scns) {
    if (assess_criticality(scn, scenario_candidates(scn)).colliding_count > 0) {
      CHECK_THROWS_AS(augment_adversarial(scn, 5, ctx), Error);
      continue;
    }
    Scenario aug;
    try {
      aug = augment_adversarial(scn, 5, ctx);
    } catch (const Error&) {
      continue;
    }
    ++succeeded;
    REQUIRE(aug.augmentation.has_value());
    const ActorId occ = aug.augmentation->occluder_id, ped = aug.augmentation->pedestrian_id;
    for (std::size_t k = 0; k < scn.tracks.frame_count(); ++k) {
      Frame kept;
      for (const auto& a : aug.tracks.frames[k]) {
        if (a.actor_id != occ && a.actor_id != ped) kept.push_back(a);
      }
      REQUIRE(kept.size() == scn.tracks.frames[k].size());
      for (std::size_t i = 0; i < kept.size(); ++i) {
        CHECK(kept[i].actor_id == scn.tracks.frames[k][i].actor_id);
        CHECK(kept[i].pose.x == scn.tracks.frames[k][i].pose.x);
        CHECK(kept[i].pose.y == scn.tracks.frames[k][i].pose.y);
      }
    }
    const auto report = assess_criticality(aug, scenario_candidates(aug));
    CHECK(report.colliding_count >= 1);
    CHECK(report.unseen_actor_ids.contains(ped));
    const auto again = augment_adversarial(scn, 5, ctx);
    CHECK(again.tracks.at(aug.plan_last, ped).pose.x == aug.tracks.at(aug.plan_last, ped).pose.x);
  }
  CHECK(succeeded > 0);
}

TEST_CASE("mix_seed separates streams") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
}
