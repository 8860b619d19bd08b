#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cobev/config.hpp"
#include "cobev/sim.hpp"

namespace cobev {

/// Seed traffic on an open plane: vehicles on a square road lattice, some of
/// them turning at a constant yaw rate, plus straight-walking pedestrians.
struct SynthConfig {
  int vehicles = 14;
  int pedestrians = 4;
  int frames = 40;
  double dt = 0.1;
  double area = 60.0;          // side of the square spawn region, meters
  double road_spacing = 20.0;  // lattice pitch
  double lane_offset = 1.75;   // right-hand lane center from the road axis
  std::pair<double, double> speed_range{4.0, 12.0};
  std::pair<double, double> pedestrian_speed_range{0.5, 1.8};
  double turning_fraction = 0.25;
  std::pair<double, double> yaw_rate_range{0.1, 0.3};  // magnitude
  /// Allowed vehicle headings; empty means the four lattice directions.
  std::vector<double> headings;

  void validate() const;
};

/// Reads the known generator fields; the caller calls r.finish().
SynthConfig read_synth_config(ConfigReader& r);

TrackSet synth_tracks(const SynthConfig& cfg, std::uint64_t seed);

}  // namespace cobev
