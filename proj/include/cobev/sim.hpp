#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <limits>
#include <vector>

#include "cobev/geometry.hpp"

namespace cobev {

using ActorId = std::int64_t;

enum class ActorKind : std::uint8_t { vehicle, pedestrian };

std::string to_string(ActorKind kind);
ActorKind parse_actor_kind(const std::string& text);
Footprint default_footprint(ActorKind kind);

struct ActorState {
  ActorId actor_id = 0;
  ActorKind kind = ActorKind::vehicle;
  Pose2 pose;
  Footprint footprint;
  double speed = 0.0;
};

using Frame = std::vector<ActorState>;

/// Global-frame motion tracks, one entry per frame at t_k = k * dt.
struct TrackSet {
  double dt = 0.1;
  std::vector<Frame> frames;

  void validate() const;
  std::size_t frame_count() const { return frames.size(); }
  /// nullptr when the actor is absent from that frame.
  const ActorState* find(std::size_t frame, ActorId id) const;
  const ActorState& at(std::size_t frame, ActorId id) const;
  bool present_throughout(ActorId id, std::size_t first, std::size_t last) const;
  /// Every actor id appearing anywhere, ascending.
  std::vector<ActorId> actor_ids() const;
};

/// Semantic classes of a bird's-eye-view observation cell. Numeric values are
/// the on-disk byte codes.
enum class CellClass : std::uint8_t { empty = 0, occupied = 1, shadow = 2, out_of_range = 3 };
inline constexpr int kClassCount = 4;
std::string to_string(CellClass c);

struct SensorConfig {
  int n_rays = 360;
  double max_range = 25.0;

  void validate() const;
};

struct GridConfig {
  double resolution = 0.2;
  int width = 256;
  int height = 256;
};

struct Obstacle {
  Pose2 pose;
  Footprint footprint;
};

struct LidarScan {
  Pose2 origin;
  int n_rays = 0;
  double max_range = 0.0;
  std::vector<double> ranges;
  /// Index into the obstacle list of the first hit per ray, -1 for none.
  std::vector<int> hit_index;
};

/// Ray i has bearing origin.theta + 2*pi*i/n_rays. The sensing agent must not
/// be part of `obstacles`.
LidarScan raycast(const Pose2& origin, std::span<const Obstacle> obstacles, int n_rays,
                  double max_range);

/// Distance along the ray (ox,oy)+t*(dx,dy), unit direction, to the first
/// boundary crossing of the rectangle with t > 0; +inf when there is none.
double ray_rect_distance(Point2 origin, Point2 dir, const Pose2& pose, const Footprint& fp);

struct ObservationRaster {
  GridSpec spec;
  std::vector<CellClass> cells;  // row-major, spec.cell_count() entries

  CellClass at(int row, int col) const { return cells[spec.index(row, col)]; }
  std::array<std::size_t, kClassCount> class_counts() const;
  bool operator==(const ObservationRaster&) const = default;
};

/// Cells render_observation would label shadow because `occluder` alone
/// blocks the line of sight (ascending linear indices), restricted to cells
/// whose centers lie within `radius` of `near`.
std::vector<std::size_t> shadow_cells(const GridSpec& spec, const ActorState& viewer,
                                      const Obstacle& occluder, double max_range,
                                      Point2 near = {0.0, 0.0},
                                      double radius = std::numeric_limits<double>::infinity());

/// Labels every cell as seen from `scan.origin`. Cells inside the viewer's own
/// footprint are empty. A cell inside another actor is occupied unless the
/// sight line to its center crosses some other actor first; a free cell is
/// shadow when its sight line crosses any actor.
ObservationRaster render_observation(const ActorState& viewer, const Frame& frame,
                                     const LidarScan& scan, const GridSpec& spec);

/// Omniscient rendering: occupied inside any non-viewer actor, empty elsewhere.
ObservationRaster render_omniscient(const ActorState& viewer, const Frame& frame,
                                    const GridSpec& spec);

std::vector<Obstacle> obstacles_excluding(const Frame& frame, ActorId viewer);

/// Grid anchored at `pose` (axis-aligned with the global frame).
GridSpec anchored_grid(const Pose2& pose, double resolution, int width, int height);

/// One raster per frame in [first, last], sensor following the viewer track.
std::vector<ObservationRaster> observation_sequence(const TrackSet& tracks, ActorId viewer_id,
                                                    std::size_t first, std::size_t last,
                                                    const GridSpec& spec,
                                                    const SensorConfig& sensor);

/// Actors other than the viewer hit by at least one ray in at least one frame.
std::set<ActorId> visible_actor_ids(const TrackSet& tracks, ActorId viewer_id,
                                    std::size_t first, std::size_t last,
                                    const SensorConfig& sensor);

}  // namespace cobev
