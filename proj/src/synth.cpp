#include "cobev/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cobev/error.hpp"

namespace cobev {

void SynthConfig::validate() const {
  if (vehicles < 0 || pedestrians < 0) throw Error("synth: actor counts must be >= 0");
  if (frames < 1) throw Error("synth: frames must be >= 1");
  if (!(dt > 0.0)) throw Error("synth: dt must be positive");
  if (!(area > 0.0) || !(road_spacing > 0.0)) throw Error("synth: area and spacing must be positive");
  const auto check = [](std::pair<double, double> r, const char* name) {
    if (!(r.first >= 0.0) || r.first > r.second) {
      throw Error(std::string("synth: invalid range ") + name);
    }
  };
  check(speed_range, "speed_range");
  check(pedestrian_speed_range, "pedestrian_speed_range");
  check(yaw_rate_range, "yaw_rate_range");
  if (turning_fraction < 0.0 || turning_fraction > 1.0) {
    throw Error("synth: turning_fraction must lie in [0, 1]");
  }
}

SynthConfig read_synth_config(ConfigReader& r) {
  SynthConfig cfg;
  cfg.vehicles = r.integer("vehicles", cfg.vehicles);
  cfg.pedestrians = r.integer("pedestrians", cfg.pedestrians);
  cfg.frames = r.integer("frames", cfg.frames);
  cfg.dt = r.number("dt", cfg.dt);
  cfg.area = r.number("area", cfg.area);
  cfg.road_spacing = r.number("road_spacing", cfg.road_spacing);
  cfg.lane_offset = r.number("lane_offset", cfg.lane_offset);
  cfg.turning_fraction = r.number("turning_fraction", cfg.turning_fraction);
  cfg.speed_range = r.range("speed_range", cfg.speed_range);
  cfg.pedestrian_speed_range = r.range("pedestrian_speed_range", cfg.pedestrian_speed_range);
  cfg.yaw_rate_range = r.range("yaw_rate_range", cfg.yaw_rate_range);
  cfg.headings = r.numbers("headings", cfg.headings);
  validate_section(r.path(), [&] { cfg.validate(); });
  return cfg;
}

namespace {

struct Mover {
  ActorState state;
  double yaw_rate = 0.0;
};

}  // namespace

TrackSet synth_tracks(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](std::pair<double, double> r) {
    return r.first + (r.second - r.first) * unit(rng);
  };
  const int roads = std::max(1, static_cast<int>(std::floor(cfg.area / cfg.road_spacing)));

  std::vector<Mover> movers;
  ActorId next_id = 1;
  for (int i = 0; i < cfg.vehicles; ++i) {
    Mover m;
    m.state.actor_id = next_id++;
    m.state.kind = ActorKind::vehicle;
    m.state.footprint = default_footprint(ActorKind::vehicle);
    double heading = 0.0;
    if (cfg.headings.empty()) {
      heading = std::numbers::pi / 2 * std::floor(4.0 * unit(rng));
    } else {
      heading = cfg.headings[static_cast<std::size_t>(
          std::floor(unit(rng) * static_cast<double>(cfg.headings.size())))];
    }
    heading = normalize_angle(heading);
    // Road axis perpendicular offset plus right-hand lane, position along it.
    const int road = static_cast<int>(std::floor(unit(rng) * roads));
    const double axis = (road + 0.5) * cfg.road_spacing - 0.5 * cfg.area;
    const double along = (unit(rng) - 0.5) * cfg.area;
    const double lane = cfg.headings.empty() ? cfg.lane_offset : 0.0;
    const Point2 p = transform_point({0.0, 0.0, heading}, {along, -lane});
    const double c = std::cos(heading), s = std::sin(heading);
    // Shift the point onto the chosen road (perpendicular to the heading).
    m.state.pose = {p.x - s * axis, p.y + c * axis, heading};
    m.state.speed = uniform(cfg.speed_range);
    if (unit(rng) < cfg.turning_fraction) {
      m.yaw_rate = uniform(cfg.yaw_rate_range) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    }
    movers.push_back(m);
  }
  for (int i = 0; i < cfg.pedestrians; ++i) {
    Mover m;
    m.state.actor_id = next_id++;
    m.state.kind = ActorKind::pedestrian;
    m.state.footprint = default_footprint(ActorKind::pedestrian);
    m.state.pose = {(unit(rng) - 0.5) * cfg.area, (unit(rng) - 0.5) * cfg.area,
                    normalize_angle(2.0 * std::numbers::pi * unit(rng))};
    m.state.speed = uniform(cfg.pedestrian_speed_range);
    movers.push_back(m);
  }

  TrackSet tracks;
  tracks.dt = cfg.dt;
  tracks.frames.resize(static_cast<std::size_t>(cfg.frames));
  for (int k = 0; k < cfg.frames; ++k) {
    for (auto& m : movers) {
      tracks.frames[static_cast<std::size_t>(k)].push_back(m.state);
      ActorState& s = m.state;
      s.pose.x += s.speed * std::cos(s.pose.theta) * cfg.dt;
      s.pose.y += s.speed * std::sin(s.pose.theta) * cfg.dt;
      s.pose.theta = normalize_angle(s.pose.theta + m.yaw_rate * cfg.dt);
    }
  }
  return tracks;
}

}  // namespace cobev
