#include "cobev/suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cobev/error.hpp"

namespace cobev {

void SuiteConfig::validate() const {
  if (size < 1 || max_tries < size) throw Error("suite: need 1 <= size <= max_tries");
  if (!(dt > 0.0)) throw Error("suite: dt must be positive");
  if (!(lane_width > 0.0)) throw Error("suite: lane_width must be positive");
  if (!(crossing_fraction >= 0.0 && crossing_fraction <= 1.0)) {
    throw Error("suite: crossing_fraction must lie in [0, 1]");
  }
  for (const auto& r : {ego_speed, parked_x, parked_spacing, oncoming_x, oncoming_speed,
                        side_street_x, side_street_y, left_street_x, tailgate_gap, occluder_offset}) {
    if (r.first > r.second) throw Error("suite: range with min > max");
  }
}

SuiteConfig read_suite_config(ConfigReader& r) {
  SuiteConfig cfg;
  cfg.size = r.integer("size", cfg.size);
  cfg.max_tries = r.integer("max_tries", cfg.max_tries);
  cfg.lane_width = r.number("lane_width", cfg.lane_width);
  cfg.ego_speed = r.range("ego_speed", cfg.ego_speed);
  cfg.parked_x = r.range("parked_x", cfg.parked_x);
  cfg.parked_spacing = r.range("parked_spacing", cfg.parked_spacing);
  cfg.oncoming_x = r.range("oncoming_x", cfg.oncoming_x);
  cfg.oncoming_speed = r.range("oncoming_speed", cfg.oncoming_speed);
  cfg.side_street_x = r.range("side_street_x", cfg.side_street_x);
  cfg.side_street_y = r.range("side_street_y", cfg.side_street_y);
  cfg.left_street_x = r.range("left_street_x", cfg.left_street_x);
  cfg.tailgate_gap = r.range("tailgate_gap", cfg.tailgate_gap);
  cfg.crossing_fraction = r.number("crossing_fraction", cfg.crossing_fraction);
  cfg.occluder_speed = r.number("occluder_speed", cfg.occluder_speed);
  cfg.occluder_offset = r.range("occluder_offset", cfg.occluder_offset);
  validate_section(r.path(), [&] { cfg.validate(); });
  return cfg;
}

namespace {

struct Seed {
  ActorId id;
  ActorKind kind;
  Pose2 pose;  // at t = 0, ego frame
  double speed;
};

// The hazard must be observable by some collaborator and avoidable by some
// candidate; otherwise no protocol can change the outcome.
bool usable(const Scenario& scn, const AugmentContext& ctx) {
  const ActorId ped = scn.augmentation->pedestrian_id;
  bool seen = false;
  for (ActorId id : scn.supporters()) {
    if (visible_actor_ids(scn.tracks, id, scn.obs_first, scn.obs_last, ctx.sensor).contains(ped)) {
      seen = true;
      break;
    }
  }
  if (!seen) return false;
  const std::vector<bool> hits = candidate_collisions(scn, scenario_candidates(scn, ctx.candidates));
  return std::find(hits.begin(), hits.end(), false) != hits.end();
}

}  // namespace

std::vector<Scenario> crafted_suite(const SuiteConfig& cfg, std::uint64_t seed,
                                    const AugmentContext& ctx) {
  cfg.validate();
  const int obs = cfg.windows.obs_frames(cfg.dt);
  const int plan = cfg.windows.plan_frames(cfg.dt);
  const int frames = obs + plan;

  std::vector<Scenario> out;
  for (int attempt = 0; attempt < cfg.max_tries && static_cast<int>(out.size()) < cfg.size;
       ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto uniform = [&](std::pair<double, double> r) {
      return r.first + (r.second - r.first) * unit(rng);
    };

    // Communicating agents get ids 1..4 in shuffled order.
    std::vector<ActorId> ids{1, 2, 3, 4};
    for (std::size_t i = ids.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(ids[i - 1], ids[pick(rng)]);
    }
    const double v = uniform(cfg.ego_speed);
    const double lane = cfg.lane_width;
    const Footprint car = default_footprint(ActorKind::vehicle);
    const double curb = -(0.5 * lane + 0.5 * car.width + 0.1);
    const double parked0 = uniform(cfg.parked_x);
    std::vector<Seed> seeds{
        {ids[0], ActorKind::vehicle, {0.0, 0.0, 0.0}, v},
        {ids[1], ActorKind::vehicle, {uniform(cfg.oncoming_x), lane, std::numbers::pi},
         uniform(cfg.oncoming_speed)},
        {ids[2], ActorKind::vehicle,
         {uniform(cfg.side_street_x), -uniform(cfg.side_street_y), std::numbers::pi / 2}, 0.0},
        {ids[3], ActorKind::vehicle,
         {uniform(cfg.left_street_x), uniform(cfg.side_street_y), -std::numbers::pi / 2}, 0.0},
        {5, ActorKind::vehicle, {-(car.length + uniform(cfg.tailgate_gap)), 0.0, 0.0}, v},
        {6, ActorKind::vehicle, {parked0, curb, 0.0}, 0.0},
        {7, ActorKind::vehicle, {parked0 + uniform(cfg.parked_spacing), curb, 0.0}, 0.0},
    };

    // Random placement of the whole scene in the world.
    const Pose2 world{uniform({-50.0, 50.0}), uniform({-50.0, 50.0}),
                      normalize_angle(uniform({-std::numbers::pi, std::numbers::pi}))};
    Scenario scn;
    scn.id = static_cast<int>(out.size());
    scn.source = "crafted";
    scn.source_offset = static_cast<std::size_t>(attempt);
    scn.tracks.dt = cfg.dt;
    scn.tracks.frames.resize(static_cast<std::size_t>(frames));
    for (int k = 0; k < frames; ++k) {
      const double tau = (k - (obs - 1)) * cfg.dt;
      for (const auto& s : seeds) {
        const Pose2 local{s.pose.x + tau * s.speed * std::cos(s.pose.theta),
                          s.pose.y + tau * s.speed * std::sin(s.pose.theta), s.pose.theta};
        scn.tracks.frames[static_cast<std::size_t>(k)].push_back(
            {s.id, s.kind, compose(world, local), default_footprint(s.kind), s.speed});
      }
    }
    scn.ego_id = ids[0];
    scn.comm_ids = {1, 2, 3, 4};
    scn.obs_first = 0;
    scn.obs_last = static_cast<std::size_t>(obs - 1);
    scn.plan_first = static_cast<std::size_t>(obs);
    scn.plan_last = static_cast<std::size_t>(frames - 1);
    scn.validate();

    AugmentContext actx = ctx;
    actx.augment.crossing_fraction = cfg.crossing_fraction;
    actx.augment.occluder_speed = cfg.occluder_speed;
    actx.augment.occluder_offset_min = cfg.occluder_offset.first;
    actx.augment.occluder_offset_max = cfg.occluder_offset.second;
    try {
      Scenario aug = augment_adversarial(scn, rng(), actx);
      if (!usable(aug, actx)) continue;
      out.push_back(std::move(aug));
    } catch (const Error&) {
      // infeasible or already critical: draw another scene
    }
  }
  if (static_cast<int>(out.size()) < cfg.size) {
    throw Error("suite: only " + std::to_string(out.size()) + " of " + std::to_string(cfg.size) +
                " scenarios could be augmented");
  }
  return out;
}

}  // namespace cobev
