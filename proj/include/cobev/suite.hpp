#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cobev/config.hpp"
#include "cobev/scenario.hpp"

namespace cobev {

/// Hand-shaped two-lane road scenes around a moving ego, each augmented with a
/// crossing occluder and a hidden pedestrian. Cars are parked along the right
/// curb and a tailgater discourages hard braking. Three communicating
/// supporters: an oncoming car and cars waiting on side streets to the right
/// and to the left. Only scenes where some supporter saw the pedestrian and
/// some candidate avoids every collision are kept.
struct SuiteConfig {
  int size = 80;
  int max_tries = 1000;
  double dt = 0.1;
  WindowConfig windows;
  std::pair<double, double> ego_speed{7.0, 10.0};
  double lane_width = 3.5;
  std::pair<double, double> parked_x{8.0, 13.0};
  std::pair<double, double> parked_spacing{5.5, 7.0};
  std::pair<double, double> oncoming_x{25.0, 32.0};
  std::pair<double, double> oncoming_speed{4.0, 8.0};
  std::pair<double, double> side_street_x{9.0, 15.0};
  std::pair<double, double> side_street_y{6.0, 9.0};
  std::pair<double, double> left_street_x{-5.0, 5.0};
  std::pair<double, double> tailgate_gap{1.5, 3.5};  // bumper to bumper
  /// Occluder timing used for this suite (see AugmentConfig).
  double crossing_fraction = 0.93;
  double occluder_speed = 8.0;
  std::pair<double, double> occluder_offset{11.0, 16.0};

  void validate() const;
};

/// Reads the known suite fields; the caller calls r.finish().
SuiteConfig read_suite_config(ConfigReader& r);

std::vector<Scenario> crafted_suite(const SuiteConfig& cfg, std::uint64_t seed,
                                    const AugmentContext& ctx = {});

}  // namespace cobev
