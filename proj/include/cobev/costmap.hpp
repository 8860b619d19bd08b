#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cobev/forecast.hpp"
#include "cobev/geometry.hpp"

namespace cobev {

inline constexpr double kDefaultSdfCap = 10.0;

/// Exact signed Euclidean distance transform of a binary occupancy plane
/// (row-major, non-zero = occupied). Free cells get the distance to the
/// nearest occupied cell center, occupied cells minus the distance to the
/// nearest free cell center. No clamping: +inf / -inf when the opposite class
/// is absent.
std::vector<double> signed_distance(std::span<const std::uint8_t> occupied, int width,
                                    int height, double resolution);

/// signed_distance clamped to [-cap, +cap].
std::vector<double> sdf(std::span<const std::uint8_t> occupied, int width, int height,
                        double resolution, double cap = kDefaultSdfCap);

struct Costmap {
  GridSpec spec;
  int horizon = 0;
  double cap = kDefaultSdfCap;
  std::vector<double> values;  // values[t * cells + cell]

  std::span<const double> plane(int t) const;
};

/// One SDF plane per timestep from the occupied class of the masks.
Costmap build_costmap(const SemanticMasks& masks, double cap = kDefaultSdfCap);

enum class Extraction { min, max, avg };

/// Reduction of plane values over the given cells; `if_empty` when the set is
/// empty (footprint off the grid).
double extract(std::span<const double> plane, std::span<const std::size_t> cells,
               Extraction strategy, double if_empty);

struct TrajectoryStats {
  double score = 0.0;  // min over time of the footprint-min SDF
  double f_o = 0.0;    // max over time of occupied-mask footprint average
  double p_o = 0.0;    // sum over time of occupied-confidence footprint average
  double f_s = 0.0;    // sum over time of shadow-mask footprint average
  double p_s = 0.0;    // sum over time of shadow-confidence footprint average

  bool operator==(const TrajectoryStats&) const = default;
};

/// `traj` holds one pose per horizon step, expressed in the grid anchor frame.
TrajectoryStats score_trajectory(const Costmap& cost, const SemanticMasks& masks,
                                 const ConfidenceMaps& maps, std::span<const Pose2> traj,
                                 const Footprint& fp);

}  // namespace cobev
