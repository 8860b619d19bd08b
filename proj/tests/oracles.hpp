#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance binary. Each one is written independently of the library code it
// checks.

#include <cstdint>
#include <random>
#include <vector>

#include "cobev/scenario.hpp"
#include "cobev/sim.hpp"

namespace oracle {

/// O(n^2) signed Euclidean transform: free cells get the distance to the
/// nearest occupied center, occupied cells minus the distance to the nearest
/// free center, +/-inf when the other class is absent.
std::vector<double> signed_distance(const std::vector<std::uint8_t>& occ, int width, int height,
                                    double resolution);

/// First intersection of the ray with any rectangle edge, from segment/segment
/// tests on the corners; max_range when nothing is hit.
double ray_range(cobev::Point2 origin, double bearing,
                 const std::vector<cobev::Obstacle>& obstacles, double max_range);

/// True when the closed segment a-b touches the closed rectangle: either end
/// inside, or a proper crossing with one of the edges.
bool segment_meets_rect(cobev::Point2 a, cobev::Point2 b, const cobev::Obstacle& ob);

/// Per-cell line-of-sight labeling.
cobev::ObservationRaster render(const cobev::ActorState& viewer, const cobev::Frame& frame,
                                const cobev::GridSpec& spec, double max_range);

/// Random frame of up to `max_obstacles` rectangles around a viewer at the
/// origin; no obstacle covers the viewer's sensor position.
struct RandomScene {
  cobev::ActorState viewer;
  cobev::Frame frame;  // viewer included
};
RandomScene random_scene(std::mt19937_64& rng, int max_obstacles, double extent);

/// Small synthetic scenario set for end-to-end checks.
std::vector<cobev::Scenario> synthetic_scenarios(std::uint64_t seed, std::size_t count);

/// Hand-built 40-frame scene: a parked ego at the origin (recorded speed 0),
/// a box occluder at (6, 3) and a pedestrian (id 3) waiting at (8, 5.5) in its
/// shadow during observation. In the plan window the pedestrian rushes to
/// (2.4, 0), touching the straight accelerating candidate at plan step 5.
/// A supporter (id 4) at (14, 2) sees the pedestrian throughout.
cobev::Scenario hidden_pedestrian_scene();

/// The single straight candidate used with hidden_pedestrian_scene:
/// accel 2 m/s^2, yaw rate 0.
cobev::CandidateConfig straight_candidate();

}  // namespace oracle
