#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "cobev/error.hpp"
#include "cobev/sim.hpp"
#include "cobev/track_io.hpp"
#include "oracles.hpp"

using namespace cobev;

namespace {

ActorState actor(ActorId id, double x, double y, double theta = 0.0, Footprint fp = {4.5, 2.0}) {
  return {id, ActorKind::vehicle, {x, y, theta}, fp, 0.0};
}

}  // namespace

TEST_CASE("raycast matches the segment intersection oracle") {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 40; ++s) {
    const auto scene = oracle::random_scene(rng, 8, 20.0);
    const auto obstacles = obstacles_excluding(scene.frame, scene.viewer.actor_id);
    const auto scan = raycast(scene.viewer.pose, obstacles, 360, 25.0);
    for (int i = 0; i < 360; ++i) {
      const double bearing = scene.viewer.pose.theta + 2 * M_PI * i / 360;
      const double ref = oracle::ray_range({scene.viewer.pose.x, scene.viewer.pose.y}, bearing,
                                           obstacles, 25.0);
      CHECK(std::abs(scan.ranges[i] - ref) <= 1e-9);
      CHECK((scan.hit_index[i] >= 0) == (ref < 25.0));
    }
  }
}

TEST_CASE("raycast examples") {
  const std::vector<Obstacle> wall{{{10, 0, 0}, {2, 40}}};
  const auto scan = raycast({0, 0, 0}, wall, 4, 25.0);
  CHECK(scan.ranges[0] == doctest::Approx(9.0));
  CHECK(scan.hit_index[0] == 0);
  CHECK(scan.ranges[2] == 25.0);
  CHECK(scan.hit_index[2] == -1);
  CHECK(raycast({0, 0, 0}, {}, 8, 5.0).ranges == std::vector<double>(8, 5.0));
  CHECK_THROWS_AS(raycast({0, 0, 0}, {}, 0, 5.0), Error);
}

TEST_CASE("render_observation matches the per-cell line-of-sight oracle") {
  std::mt19937_64 rng(12);
  for (int s = 0; s < 25; ++s) {
    const auto scene = oracle::random_scene(rng, 8, 14.0);
    const GridSpec spec = anchored_grid(scene.viewer.pose, 0.4, 80, 72);
    const auto scan =
        raycast(scene.viewer.pose, obstacles_excluding(scene.frame, 0), 360, 12.0);
    const auto got = render_observation(scene.viewer, scene.frame, scan, spec);
    const auto want = oracle::render(scene.viewer, scene.frame, spec, 12.0);
    CHECK(got.cells == want.cells);
  }
}

TEST_CASE("render_observation: occluder casts a shadow, own footprint is empty") {
  const ActorState viewer = actor(0, 0, 0);
  const Frame frame{viewer, actor(1, 6, 0, 0, {1, 4})};
  const GridSpec spec = anchored_grid(viewer.pose, 0.5, 60, 60);
  const auto r = render_observation(viewer, frame, raycast(viewer.pose, obstacles_excluding(frame, 0), 360, 12), spec);
  const auto at = [&](double x, double y) {
    const auto c = spec.cell_of_world({x, y});
    REQUIRE(c.has_value());
    return r.at(c->row, c->col);
  };
  CHECK(at(0.1, 0.1) == CellClass::empty);
  CHECK(at(6.1, 0.1) == CellClass::occupied);
  CHECK(at(10.1, 0.1) == CellClass::shadow);
  CHECK(at(-10.1, 0.1) == CellClass::empty);
  const auto counts = r.class_counts();
  CHECK(counts[0] + counts[1] + counts[2] + counts[3] == spec.cell_count());
  CHECK(counts[static_cast<int>(CellClass::out_of_range)] > 0);
}

TEST_CASE("render_omniscient has no shadow or out-of-range cells") {
  std::mt19937_64 rng(13);
  const auto scene = oracle::random_scene(rng, 8, 14.0);
  const GridSpec spec = anchored_grid(scene.viewer.pose, 0.4, 100, 100);
  const auto r = render_omniscient(scene.viewer, scene.frame, spec);
  CHECK(r.class_counts()[static_cast<int>(CellClass::shadow)] == 0);
  CHECK(r.class_counts()[static_cast<int>(CellClass::out_of_range)] == 0);
}

TEST_CASE("shadow_cells is the occluder's shadow in render_observation") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> pos(-12, 12), ang(-M_PI, M_PI);
  for (int s = 0; s < 20; ++s) {
    const ActorState viewer = actor(0, 0, 0, ang(rng));
    const ActorState occ = actor(1, pos(rng), pos(rng), ang(rng));
    if (rect_contains(occ.pose, {5, 3}, {0, 0})) continue;
    const Frame frame{viewer, occ};
    const GridSpec spec = anchored_grid(viewer.pose, 0.5, 64, 64);
    const auto r = render_observation(viewer, frame, raycast(viewer.pose, obstacles_excluding(frame, 0), 360, 14), spec);
    std::vector<std::size_t> want;
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
      if (r.cells[i] == CellClass::shadow) want.push_back(i);
    }
    const Obstacle ob{occ.pose, occ.footprint};
    CHECK(shadow_cells(spec, viewer, ob, 14) == want);

    const Point2 near{pos(rng), pos(rng)};
    const double radius = 6.0;
    std::vector<std::size_t> disc;
    for (auto i : want) {
      const Cell c = spec.cell_at(i);
      const Point2 p = spec.world_center(c.row, c.col);
      if (std::hypot(p.x - near.x, p.y - near.y) <= radius) disc.push_back(i);
    }
    CHECK(shadow_cells(spec, viewer, ob, 14, near, radius) == disc);
  }
}

TEST_CASE("observation_sequence and visible_actor_ids") {
  TrackSet tracks;
  for (int k = 0; k < 5; ++k) {
    tracks.frames.push_back({actor(0, 0, 0), actor(1, 8, 0, 0, {1, 6}), actor(2, 16, 0, 0, {1, 1}),
                             actor(3, -8, 2.0 * k, 0, {1, 1})});
  }
  const GridSpec spec = anchored_grid({0, 0, 0}, 0.5, 40, 40);
  const auto seq = observation_sequence(tracks, 0, 1, 3, spec, {});
  CHECK(seq.size() == 3);
  const auto single = observation_sequence(tracks, 0, 2, 2, spec, {});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == render_observation(tracks.frames[2][0], tracks.frames[2],
                                        raycast({0, 0, 0}, obstacles_excluding(tracks.frames[2], 0), 360, 25),
                                        spec));
  const auto seen = visible_actor_ids(tracks, 0, 0, 4, {});
  CHECK(seen.contains(1));
  CHECK_FALSE(seen.contains(2));  // hidden behind 1
  CHECK(seen.contains(3));
  CHECK_THROWS_AS(visible_actor_ids(tracks, 9, 0, 4, {}), Error);
}

TEST_CASE("visible_actor_ids never grows when an occluder is added") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> pos(-15, 15), ang(-M_PI, M_PI);
  for (int s = 0; s < 30; ++s) {
    const auto scene = oracle::random_scene(rng, 6, 15.0);
    TrackSet tracks{0.1, {scene.frame}};
    const auto before = visible_actor_ids(tracks, 0, 0, 0, {});
    const ActorState extra = actor(99, pos(rng), pos(rng), ang(rng));
    if (rect_contains(extra.pose, {5, 3}, {scene.viewer.pose.x, scene.viewer.pose.y})) continue;
    tracks.frames[0].push_back(extra);
    auto after = visible_actor_ids(tracks, 0, 0, 0, {});
    after.erase(99);
    CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
  }
}

TEST_CASE("track CSV round trip is exact") {
  TrackSet tracks;
  tracks.dt = 0.1;
  tracks.frames = {{actor(3, 1.0 / 3, -2.5, 0.7)},
                   {actor(3, 0.5, -2.4, 0.71), {5, ActorKind::pedestrian, {1, 1, 0}, {0.6, 0.6}, 1.2}}};
  std::stringstream ss;
  write_tracks_csv(ss, tracks);
  const std::string text = ss.str();
  CHECK(text.rfind(kTrackCsvHeader, 0) == 0);
  const TrackSet back = read_tracks_csv(ss, 0.1);
  REQUIRE(back.frames.size() == 2);
  CHECK(back.at(0, 3).pose.x == tracks.at(0, 3).pose.x);
  CHECK(back.at(1, 5).kind == ActorKind::pedestrian);
  std::stringstream again;
  write_tracks_csv(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("track CSV: defaults, rebasing and errors") {
  std::stringstream ok(std::string(kTrackCsvHeader) +
                       "\n7,10,pedestrian,1,2,0,1,,\n7,11,pedestrian,1.1,2,0,1,,\n");
  const TrackSet t = read_tracks_csv(ok, 0.1);
  REQUIRE(t.frames.size() == 2);
  CHECK(t.at(0, 7).footprint.length == 0.6);
  std::stringstream gap(std::string(kTrackCsvHeader) +
                        "\n1,0,vehicle,0,0,0,1,,\n1,2,vehicle,0,0,0,1,,\n");
  CHECK_THROWS_AS(read_tracks_csv(gap, 0.1), Error);
  std::stringstream bad(std::string(kTrackCsvHeader) + "\n1,0,boat,0,0,0,1,,\n");
  CHECK_THROWS_AS(read_tracks_csv(bad, 0.1), Error);
  CHECK_THROWS_AS(load_tracks_csv("/nonexistent/tracks.csv", 0.1), Error);
}
