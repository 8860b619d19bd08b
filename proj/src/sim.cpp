#include "cobev/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cobev/error.hpp"

namespace cobev {

std::string to_string(ActorKind kind) {
  return kind == ActorKind::vehicle ? "vehicle" : "pedestrian";
}

ActorKind parse_actor_kind(const std::string& text) {
  if (text == "vehicle") return ActorKind::vehicle;
  if (text == "pedestrian") return ActorKind::pedestrian;
  throw Error("unknown actor kind '" + text + "'");
}

Footprint default_footprint(ActorKind kind) {
  return kind == ActorKind::vehicle ? Footprint{4.5, 2.0} : Footprint{0.6, 0.6};
}

std::string to_string(CellClass c) {
  switch (c) {
    case CellClass::empty: return "empty";
    case CellClass::occupied: return "occupied";
    case CellClass::shadow: return "shadow";
    case CellClass::out_of_range: return "outOfRange";
  }
  return "?";
}

void TrackSet::validate() const {
  if (!(dt > 0.0)) throw Error("track dt must be positive");
  std::vector<std::pair<ActorId, Footprint>> dims;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    std::set<ActorId> seen;
    for (const auto& a : frames[k]) {
      if (!seen.insert(a.actor_id).second) {
        throw Error("actor " + std::to_string(a.actor_id) + " duplicated in frame " +
                    std::to_string(k));
      }
      if (a.speed < 0.0) throw Error("negative speed for actor " + std::to_string(a.actor_id));
      a.footprint.validate();
      auto it = std::find_if(dims.begin(), dims.end(),
                             [&](const auto& d) { return d.first == a.actor_id; });
      if (it == dims.end()) {
        dims.emplace_back(a.actor_id, a.footprint);
      } else if (it->second.length != a.footprint.length ||
                 it->second.width != a.footprint.width) {
        throw Error("footprint of actor " + std::to_string(a.actor_id) + " changes over time");
      }
    }
  }
}

const ActorState* TrackSet::find(std::size_t frame, ActorId id) const {
  if (frame >= frames.size()) return nullptr;
  for (const auto& a : frames[frame]) {
    if (a.actor_id == id) return &a;
  }
  return nullptr;
}

const ActorState& TrackSet::at(std::size_t frame, ActorId id) const {
  const ActorState* a = find(frame, id);
  if (a == nullptr) {
    throw Error("actor " + std::to_string(id) + " absent from frame " + std::to_string(frame));
  }
  return *a;
}

bool TrackSet::present_throughout(ActorId id, std::size_t first, std::size_t last) const {
  for (std::size_t k = first; k <= last; ++k) {
    if (find(k, id) == nullptr) return false;
  }
  return true;
}

std::vector<ActorId> TrackSet::actor_ids() const {
  std::set<ActorId> ids;
  for (const auto& f : frames) {
    for (const auto& a : f) ids.insert(a.actor_id);
  }
  return {ids.begin(), ids.end()};
}

void SensorConfig::validate() const {
  if (n_rays < 1) throw Error("sensor n_rays must be >= 1");
  if (!(max_range > 0.0)) throw Error("sensor max_range must be positive");
}

std::array<std::size_t, kClassCount> ObservationRaster::class_counts() const {
  std::array<std::size_t, kClassCount> counts{};
  for (auto c : cells) ++counts[static_cast<int>(c)];
  return counts;
}

double ray_rect_distance(Point2 origin, Point2 dir, const Pose2& pose, const Footprint& fp) {
  // Slab test in the rectangle frame.
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double ox = c * (origin.x - pose.x) + s * (origin.y - pose.y);
  const double oy = -s * (origin.x - pose.x) + c * (origin.y - pose.y);
  const double dx = c * dir.x + s * dir.y;
  const double dy = -s * dir.x + c * dir.y;
  const double half[2] = {0.5 * fp.length, 0.5 * fp.width};
  const double o[2] = {ox, oy};
  const double d[2] = {dx, dy};
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (o[axis] < -half[axis] || o[axis] > half[axis]) {
        return std::numeric_limits<double>::infinity();
      }
      continue;
    }
    double t0 = (-half[axis] - o[axis]) / d[axis];
    double t1 = (half[axis] - o[axis]) / d[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter > t_exit) return std::numeric_limits<double>::infinity();
  if (t_enter > 0.0) return t_enter;
  if (t_exit > 0.0) return t_exit;  // origin inside: first edge crossing is the exit
  return std::numeric_limits<double>::infinity();
}

LidarScan raycast(const Pose2& origin, std::span<const Obstacle> obstacles, int n_rays,
                  double max_range) {
  SensorConfig{n_rays, max_range}.validate();
  LidarScan scan{origin, n_rays, max_range, std::vector<double>(n_rays, max_range),
                 std::vector<int>(n_rays, -1)};
  const Point2 o{origin.x, origin.y};
  for (int i = 0; i < n_rays; ++i) {
    const double bearing = origin.theta + 2.0 * std::numbers::pi * i / n_rays;
    const Point2 dir{std::cos(bearing), std::sin(bearing)};
    for (std::size_t j = 0; j < obstacles.size(); ++j) {
      const double t = ray_rect_distance(o, dir, obstacles[j].pose, obstacles[j].footprint);
      if (t <= scan.ranges[i] && t < std::numeric_limits<double>::infinity()) {
        if (t < scan.ranges[i] || scan.hit_index[i] < 0) {
          scan.ranges[i] = t;
          scan.hit_index[i] = static_cast<int>(j);
        }
      }
    }
  }
  return scan;
}

std::vector<Obstacle> obstacles_excluding(const Frame& frame, ActorId viewer) {
  std::vector<Obstacle> out;
  out.reserve(frame.size());
  for (const auto& a : frame) {
    if (a.actor_id != viewer) out.push_back({a.pose, a.footprint});
  }
  return out;
}

namespace {

// Precomputed sight-line blocker with a conservative angular cull.
struct Blocker {
  Pose2 pose;
  double c, s, hl, hw;
  double ox, oy;  // sensor origin in the blocker frame
  bool always_test;
  double bx = 1.0, by = 0.0, cos_half = -1.0, near_dist = 0.0;

  Blocker(const Obstacle& ob, Point2 origin)
      : pose(ob.pose),
        c(std::cos(ob.pose.theta)),
        s(std::sin(ob.pose.theta)),
        hl(0.5 * ob.footprint.length),
        hw(0.5 * ob.footprint.width) {
    ox = c * (origin.x - pose.x) + s * (origin.y - pose.y);
    oy = -s * (origin.x - pose.x) + c * (origin.y - pose.y);
    const double radius = std::hypot(hl, hw) + 1e-6;
    const double dist = std::hypot(pose.x - origin.x, pose.y - origin.y);
    always_test = dist <= radius * 1.01;
    if (!always_test) {
      bx = (pose.x - origin.x) / dist;
      by = (pose.y - origin.y) / dist;
      // Half-angle of the cone containing the body, widened slightly so the
      // cull never drops a cell the exact test would block.
      cos_half = std::cos(std::min(std::asin(radius / dist) + 1e-6, std::numbers::pi / 2));
    }
    near_dist = always_test ? 0.0 : dist - radius;
  }

  bool contains(Point2 p) const {
    const double u = c * (p.x - pose.x) + s * (p.y - pose.y);
    const double v = -s * (p.x - pose.x) + c * (p.y - pose.y);
    return u >= -hl && u < hl && v >= -hw && v < hw;
  }

  // Does the segment origin->p meet the closed rectangle at a parameter < 1?
  bool blocks(Point2 p) const {
    const double px = c * (p.x - pose.x) + s * (p.y - pose.y);
    const double py = -s * (p.x - pose.x) + c * (p.y - pose.y);
    const double d[2] = {px - ox, py - oy};
    const double o[2] = {ox, oy};
    const double half[2] = {hl, hw};
    double t_enter = -std::numeric_limits<double>::infinity();
    double t_exit = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 2; ++axis) {
      if (d[axis] == 0.0) {
        if (o[axis] < -half[axis] || o[axis] > half[axis]) return false;
        continue;
      }
      double t0 = (-half[axis] - o[axis]) / d[axis];
      double t1 = (half[axis] - o[axis]) / d[axis];
      if (t0 > t1) std::swap(t0, t1);
      t_enter = std::max(t_enter, t0);
      t_exit = std::min(t_exit, t1);
    }
    return t_enter <= t_exit && t_exit >= 0.0 && t_enter < 1.0;
  }

  // Cheap rejection: cell nearer than the body or outside its angular cone.
  bool may_block(Point2 d, double cell_dist) const {
    if (always_test) return true;
    if (cell_dist < near_dist) return false;
    return d.x * bx + d.y * by >= cos_half * cell_dist - 1e-9;
  }
};

}  // namespace

ObservationRaster render_observation(const ActorState& viewer, const Frame& frame,
                                     const LidarScan& scan, const GridSpec& spec) {
  spec.validate();
  const Point2 origin{scan.origin.x, scan.origin.y};
  std::vector<Blocker> blockers;
  for (const auto& ob : obstacles_excluding(frame, viewer.actor_id)) {
    blockers.emplace_back(ob, origin);
  }

  const Blocker self({viewer.pose, viewer.footprint}, origin);
  const CellCenters centers(spec);
  ObservationRaster raster{spec, std::vector<CellClass>(spec.cell_count(), CellClass::empty)};
  std::vector<char> inside(blockers.size());
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      const Point2 p = centers(row, col);
      const Point2 d{p.x - origin.x, p.y - origin.y};
      const double dist = std::hypot(d.x, d.y);
      CellClass& label = raster.cells[spec.index(row, col)];
      if (dist > scan.max_range) {
        label = CellClass::out_of_range;
        continue;
      }
      if (self.contains(p)) continue;
      bool any_inside = false;
      for (std::size_t j = 0; j < blockers.size(); ++j) {
        inside[j] = blockers[j].contains(p);
        any_inside = any_inside || inside[j];
      }
      bool blocked = false;
      for (std::size_t j = 0; j < blockers.size() && !blocked; ++j) {
        if (inside[j] || !blockers[j].may_block(d, dist)) continue;
        blocked = blockers[j].blocks(p);
      }
      if (blocked) {
        label = CellClass::shadow;
      } else if (any_inside) {
        label = CellClass::occupied;
      }
    }
  }
  return raster;
}

std::vector<std::size_t> shadow_cells(const GridSpec& spec, const ActorState& viewer,
                                      const Obstacle& occluder, double max_range, Point2 near,
                                      double radius) {
  spec.validate();
  if (!(radius >= 0.0)) return {};
  const Point2 origin{viewer.pose.x, viewer.pose.y};
  const Blocker b(occluder, origin);
  const Blocker self({viewer.pose, viewer.footprint}, origin);
  const CellCenters centers(spec);
  int row_lo = 0, row_hi = spec.height - 1, col_lo = 0, col_hi = spec.width - 1;
  if (std::isfinite(radius)) {
    const Pose2 local = relative(spec.center, {near.x, near.y, 0.0});
    const auto index = [&](double v, int n) {
      return static_cast<int>(std::clamp(std::floor(v / spec.resolution + 0.5 * n), -1.0,
                                         static_cast<double>(n)));
    };
    col_lo = std::max(0, index(local.x - radius, spec.width));
    col_hi = std::min(spec.width - 1, index(local.x + radius, spec.width));
    row_lo = std::max(0, index(local.y - radius, spec.height));
    row_hi = std::min(spec.height - 1, index(local.y + radius, spec.height));
  }
  std::vector<std::size_t> out;
  for (int row = row_lo; row <= row_hi; ++row) {
    for (int col = col_lo; col <= col_hi; ++col) {
      const Point2 p = centers(row, col);
      if (std::hypot(p.x - near.x, p.y - near.y) > radius) continue;
      const Point2 d{p.x - origin.x, p.y - origin.y};
      const double dist = std::hypot(d.x, d.y);
      if (dist > max_range || dist < b.near_dist) continue;
      if (!b.may_block(d, dist)) continue;
      if (b.contains(p) || self.contains(p)) continue;
      if (b.blocks(p)) out.push_back(spec.index(row, col));
    }
  }
  return out;
}

ObservationRaster render_omniscient(const ActorState& viewer, const Frame& frame,
                                    const GridSpec& spec) {
  spec.validate();
  ObservationRaster raster{spec, std::vector<CellClass>(spec.cell_count(), CellClass::empty)};
  for (const auto& a : frame) {
    if (a.actor_id == viewer.actor_id) continue;
    for (auto idx : footprint_cells(spec, a.pose, a.footprint)) {
      raster.cells[idx] = CellClass::occupied;
    }
  }
  return raster;
}

GridSpec anchored_grid(const Pose2& pose, double resolution, int width, int height) {
  GridSpec spec{{pose.x, pose.y, 0.0}, resolution, width, height};
  spec.validate();
  return spec;
}

std::vector<ObservationRaster> observation_sequence(const TrackSet& tracks, ActorId viewer_id,
                                                    std::size_t first, std::size_t last,
                                                    const GridSpec& spec,
                                                    const SensorConfig& sensor) {
  if (first > last || !tracks.present_throughout(viewer_id, first, last)) {
    throw Error("viewer absent");
  }
  std::vector<ObservationRaster> out;
  out.reserve(last - first + 1);
  for (std::size_t k = first; k <= last; ++k) {
    const ActorState& viewer = tracks.at(k, viewer_id);
    const auto obstacles = obstacles_excluding(tracks.frames[k], viewer_id);
    const LidarScan scan = raycast(viewer.pose, obstacles, sensor.n_rays, sensor.max_range);
    out.push_back(render_observation(viewer, tracks.frames[k], scan, spec));
  }
  return out;
}

std::set<ActorId> visible_actor_ids(const TrackSet& tracks, ActorId viewer_id,
                                    std::size_t first, std::size_t last,
                                    const SensorConfig& sensor) {
  if (first > last || !tracks.present_throughout(viewer_id, first, last)) {
    throw Error("viewer absent");
  }
  std::set<ActorId> visible;
  for (std::size_t k = first; k <= last; ++k) {
    const ActorState& viewer = tracks.at(k, viewer_id);
    std::vector<ActorId> ids;
    std::vector<Obstacle> obstacles;
    for (const auto& a : tracks.frames[k]) {
      if (a.actor_id == viewer_id) continue;
      ids.push_back(a.actor_id);
      obstacles.push_back({a.pose, a.footprint});
    }
    const LidarScan scan = raycast(viewer.pose, obstacles, sensor.n_rays, sensor.max_range);
    for (int hit : scan.hit_index) {
      if (hit >= 0) visible.insert(ids[hit]);
    }
  }
  return visible;
}

}  // namespace cobev
