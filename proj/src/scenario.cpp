#include "cobev/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cobev/error.hpp"

namespace cobev {

int WindowConfig::obs_frames(double dt) const { return static_cast<int>(std::lround(obs_s / dt)); }
int WindowConfig::plan_frames(double dt) const {
  return static_cast<int>(std::lround(plan_s / dt));
}

std::vector<ActorId> Scenario::supporters() const {
  std::vector<ActorId> out;
  for (auto id : comm_ids) {
    if (id != ego_id) out.push_back(id);
  }
  return out;
}

void Scenario::validate() const {
  tracks.validate();
  if (!(obs_first <= obs_last && obs_last < plan_first && plan_first <= plan_last &&
        plan_last < tracks.frame_count())) {
    throw Error("scenario " + std::to_string(id) + ": inconsistent frame windows");
  }
  if (std::find(comm_ids.begin(), comm_ids.end(), ego_id) == comm_ids.end()) {
    throw Error("scenario " + std::to_string(id) + ": ego is not communication-enabled");
  }
  for (auto a : comm_ids) {
    if (!tracks.present_throughout(a, obs_first, plan_last)) {
      throw Error("scenario " + std::to_string(id) + ": comm actor " + std::to_string(a) +
                  " missing from window");
    }
  }
}

void CandidateConfig::validate() const {
  if (n_accel < 1 || n_yaw_rate < 1) throw Error("candidate grid must be non-empty");
  if (accel_min > accel_max || yaw_rate_min > yaw_rate_max) {
    throw Error("candidate ranges must satisfy min <= max");
  }
  if (substeps < 1) throw Error("candidate substeps must be >= 1");
}

void AugmentConfig::validate() const {
  if (occluder_offset_min > occluder_offset_max) throw Error("augment: offset range reversed");
  occluder_footprint.validate();
  pedestrian_footprint.validate();
  if (!(pedestrian_max_speed > 0.0)) throw Error("augment: pedestrian speed cap must be positive");
  if (max_attempts < 1) throw Error("augment: max_attempts must be >= 1");
  if (crossing_fraction < 0.0 || crossing_fraction > 1.0) {
    throw Error("augment: crossing_fraction must lie in [0, 1]");
  }
}

namespace {

double grid_value(double lo, double hi, int i, int n) {
  return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
}

}  // namespace

CandidateSet generate_candidates(double initial_speed, double dt, int horizon,
                                 const CandidateConfig& cfg) {
  cfg.validate();
  if (initial_speed < 0.0) throw Error("initial speed must be non-negative");
  if (!(dt > 0.0) || horizon < 1) throw Error("candidate dt and horizon must be positive");

  CandidateSet set;
  set.dt = dt;
  const double h = dt / cfg.substeps;
  for (int ia = 0; ia < cfg.n_accel; ++ia) {
    const double a = grid_value(cfg.accel_min, cfg.accel_max, ia, cfg.n_accel);
    for (int iw = 0; iw < cfg.n_yaw_rate; ++iw) {
      const double w = grid_value(cfg.yaw_rate_min, cfg.yaw_rate_max, iw, cfg.n_yaw_rate);
      std::vector<Pose2> poses;
      std::vector<double> speeds;
      double x = 0.0, y = 0.0, theta = 0.0, v = initial_speed;
      for (int t = 0; t < horizon; ++t) {
        for (int k = 0; k < cfg.substeps; ++k) {
          // Trapezoidal step; the speed floor keeps braking from reversing.
          const double v_next = std::max(0.0, v + a * h);
          const double theta_next = theta + w * h;
          x += 0.5 * h * (v * std::cos(theta) + v_next * std::cos(theta_next));
          y += 0.5 * h * (v * std::sin(theta) + v_next * std::sin(theta_next));
          v = v_next;
          theta = theta_next;
        }
        poses.push_back({x, y, normalize_angle(theta)});
        speeds.push_back(v);
      }
      set.candidates.push_back(std::move(poses));
      set.speeds.push_back(std::move(speeds));
      set.accel.push_back(a);
      set.yaw_rate.push_back(w);
    }
  }
  return set;
}

CandidateSet scenario_candidates(const Scenario& scn, const CandidateConfig& cfg) {
  return generate_candidates(scn.ego_now().speed, scn.tracks.dt, scn.horizon(), cfg);
}

std::vector<std::vector<Pose2>> candidates_in_world(const Scenario& scn,
                                                    const CandidateSet& cands) {
  const Pose2 ego = scn.ego_now().pose;
  std::vector<std::vector<Pose2>> out;
  out.reserve(cands.size());
  for (const auto& traj : cands.candidates) {
    std::vector<Pose2> world;
    world.reserve(traj.size());
    for (const auto& p : traj) world.push_back(compose(ego, p));
    out.push_back(std::move(world));
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Scenario> slice_scenarios(const TrackSet& tracks, int stride, std::uint64_t seed,
                                      const SliceConfig& cfg) {
  if (stride < 1) throw Error("scenario stride must be >= 1");
  if (cfg.comm_count < 1) throw Error("comm_count must be >= 1");
  const int obs = cfg.windows.obs_frames(tracks.dt);
  const int plan = cfg.windows.plan_frames(tracks.dt);
  if (obs < 2 || plan < 1) throw Error("observation/planning windows too short for dt");
  const std::size_t window = static_cast<std::size_t>(obs + plan);

  std::vector<Scenario> out;
  int window_index = 0;
  for (std::size_t start = 0; start + window <= tracks.frame_count();
       start += static_cast<std::size_t>(stride), ++window_index) {
    std::vector<ActorId> eligible;
    for (const auto& a : tracks.frames[start]) {
      if (a.kind == ActorKind::vehicle &&
          tracks.present_throughout(a.actor_id, start, start + window - 1)) {
        eligible.push_back(a.actor_id);
      }
    }
    if (eligible.empty()) continue;
    std::sort(eligible.begin(), eligible.end());

    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(window_index)));
    const std::size_t take = std::min<std::size_t>(cfg.comm_count, eligible.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, eligible.size() - 1);
      std::swap(eligible[i], eligible[pick(rng)]);
    }

    Scenario scn;
    scn.id = static_cast<int>(out.size());
    scn.source_offset = start;
    scn.tracks.dt = tracks.dt;
    scn.tracks.frames.assign(tracks.frames.begin() + static_cast<std::ptrdiff_t>(start),
                             tracks.frames.begin() + static_cast<std::ptrdiff_t>(start + window));
    scn.ego_id = eligible.front();
    scn.comm_ids.assign(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(scn.comm_ids.begin(), scn.comm_ids.end());
    scn.obs_first = 0;
    scn.obs_last = static_cast<std::size_t>(obs - 1);
    scn.plan_first = scn.obs_last + 1;
    scn.plan_last = window - 1;
    out.push_back(std::move(scn));
  }
  return out;
}

namespace {

// Calls fn(candidate, actor) for every overlap between a candidate footprint
// and another actor during the planning window.
template <typename Fn>
void for_each_plan_overlap(const Scenario& scn, const CandidateSet& cands, Fn&& fn) {
  const ActorState& ego = scn.ego_now();
  const auto world = candidates_in_world(scn, cands);
  const int steps = std::min(cands.horizon(), scn.horizon());
  for (std::size_t i = 0; i < world.size(); ++i) {
    for (int t = 1; t <= steps; ++t) {
      const Pose2& pose = world[i][static_cast<std::size_t>(t - 1)];
      for (const auto& other : scn.tracks.frames[scn.plan_first + static_cast<std::size_t>(t - 1)]) {
        if (other.actor_id == ego.actor_id) continue;
        if (rectangles_overlap(pose, ego.footprint, other.pose, other.footprint)) {
          fn(i, other.actor_id);
        }
      }
    }
  }
}

}  // namespace

CriticalityReport assess_criticality(const Scenario& scn, const CandidateSet& cands,
                                     const SensorConfig& sensor) {
  const auto visible =
      visible_actor_ids(scn.tracks, scn.ego_id, scn.obs_first, scn.obs_last, sensor);
  CriticalityReport report;
  report.collides_with_unseen.assign(cands.size(), false);
  for_each_plan_overlap(scn, cands, [&](std::size_t i, ActorId other) {
    if (visible.count(other) != 0) return;
    report.collides_with_unseen[i] = true;
    report.unseen_actor_ids.insert(other);
  });
  report.colliding_count = static_cast<int>(
      std::count(report.collides_with_unseen.begin(), report.collides_with_unseen.end(), true));
  return report;
}

std::vector<bool> candidate_collisions(const Scenario& scn, const CandidateSet& cands) {
  std::vector<bool> flags(cands.size(), false);
  for_each_plan_overlap(scn, cands, [&](std::size_t i, ActorId) { flags[i] = true; });
  return flags;
}

std::vector<std::size_t> criticality_histogram(const std::vector<CriticalityReport>& reports,
                                               int n_candidates) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_candidates) + 1, 0);
  for (const auto& r : reports) {
    if (r.colliding_count < 0 || r.colliding_count > n_candidates) {
      throw Error("colliding_count outside [0, N]");
    }
    ++counts[static_cast<std::size_t>(r.colliding_count)];
  }
  return counts;
}

namespace {

ActorId next_free_id(const TrackSet& tracks) {
  const auto ids = tracks.actor_ids();
  return ids.empty() ? 1 : ids.back() + 1;
}

// Index of the candidate closest (summed squared waypoint distance) to the
// ego's recorded planning-window path.
std::size_t candidate_nearest_recorded_path(const Scenario& scn, const CandidateSet& cands) {
  const Pose2 ego0 = scn.ego_now().pose;
  const int steps = std::min(cands.horizon(), scn.horizon());
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    double cost = 0.0;
    for (int t = 1; t <= steps; ++t) {
      const Pose2 rec = relative(
          ego0, scn.tracks.at(scn.plan_first + static_cast<std::size_t>(t - 1), scn.ego_id).pose);
      const Pose2& c = cands.candidates[i][static_cast<std::size_t>(t - 1)];
      cost += (rec.x - c.x) * (rec.x - c.x) + (rec.y - c.y) * (rec.y - c.y);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }
  return best;
}

}  // namespace

Scenario augment_adversarial(const Scenario& scn, std::uint64_t seed, const AugmentContext& ctx) {
  ctx.augment.validate();
  const CandidateSet cands = scenario_candidates(scn, ctx.candidates);
  if (assess_criticality(scn, cands, ctx.sensor).colliding_count > 0) {
    throw Error("scenario already critical");
  }

  const ActorState& ego_now = scn.ego_now();
  const double dt = scn.tracks.dt;
  const double obs_span = static_cast<double>(scn.obs_last - scn.obs_first);
  const std::size_t mid =
      scn.obs_first + static_cast<std::size_t>(std::lround(ctx.augment.crossing_fraction * obs_span));
  const ActorState& ego_mid = scn.tracks.at(mid, scn.ego_id);
  const double obs_duration = static_cast<double>(scn.obs_last - scn.obs_first + 1) * dt;

  // Waypoints of the path candidate that leave the ego's current footprint.
  if (ctx.augment.target_candidate >= static_cast<int>(cands.size())) {
    throw Error("augment: target candidate out of range");
  }
  const std::size_t target = ctx.augment.target_candidate >= 0
                                 ? static_cast<std::size_t>(ctx.augment.target_candidate)
                                 : candidate_nearest_recorded_path(scn, cands);
  std::vector<int> eligible_steps;
  for (int t = 1; t <= std::min(cands.horizon(), scn.horizon()); ++t) {
    const Pose2 w = compose(ego_now.pose, cands.candidates[target][static_cast<std::size_t>(t - 1)]);
    if (!rectangles_overlap(w, ctx.augment.pedestrian_footprint, ego_now.pose,
                            ego_now.footprint)) {
      eligible_steps.push_back(t);
    }
  }
  if (eligible_steps.empty()) throw Error("augmentation infeasible");

  const GridSpec spec = anchored_grid(ego_now.pose, ctx.grid.resolution, ctx.grid.width,
                                      ctx.grid.height);
  const ActorId occluder_id = next_free_id(scn.tracks);
  const ActorId pedestrian_id = occluder_id + 1;
  const Footprint& occ_fp = ctx.augment.occluder_footprint;
  // By default the occluder body sweeps across the ego's corridor within a third
  // of the observation window.
  const double occ_speed = ctx.augment.occluder_speed > 0.0
                               ? ctx.augment.occluder_speed
                               : (occ_fp.length + ego_mid.footprint.width) / (obs_duration / 3.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset_dist(ctx.augment.occluder_offset_min,
                                                     ctx.augment.occluder_offset_max);
  std::bernoulli_distribution side_dist(0.5);
  std::uniform_int_distribution<std::size_t> step_pick(0, eligible_steps.size() - 1);

  for (int attempt = 1; attempt <= ctx.augment.max_attempts; ++attempt) {
    const double offset = offset_dist(rng);
    const double side = side_dist(rng) ? 1.0 : -1.0;
    const Point2 crossing = transform_point(ego_mid.pose, {offset, 0.0});
    const double occ_heading = normalize_angle(ego_mid.pose.theta + side * std::numbers::pi / 2);
    const Point2 occ_dir{std::cos(occ_heading), std::sin(occ_heading)};

    TrackSet tracks = scn.tracks;
    for (std::size_t k = 0; k < tracks.frame_count(); ++k) {
      const double s = (static_cast<double>(k) - static_cast<double>(mid)) * dt * occ_speed;
      tracks.frames[k].push_back({occluder_id, ActorKind::vehicle,
                                  {crossing.x + s * occ_dir.x, crossing.y + s * occ_dir.y,
                                   occ_heading},
                                  occ_fp, occ_speed});
    }

    const int step = eligible_steps[step_pick(rng)];
    const std::size_t meet_frame = scn.plan_first + static_cast<std::size_t>(step - 1);
    const Pose2 meet =
        compose(ego_now.pose, cands.candidates[target][static_cast<std::size_t>(step - 1)]);
    const double travel = static_cast<double>(meet_frame - mid) * dt;
    const double reach = ctx.augment.pedestrian_max_speed * travel;

    // Spawn cells: shadow of the occluder as the ego sees the crossing frame,
    // close enough to reach the meeting point in time.
    std::vector<Point2> feasible;
    for (auto idx : shadow_cells(spec, ego_mid, {tracks.frames[mid].back().pose, occ_fp},
                                 ctx.sensor.max_range, {meet.x, meet.y}, reach)) {
      const Cell c = spec.cell_at(idx);
      feasible.push_back(spec.world_center(c.row, c.col));
    }
    if (feasible.empty()) continue;
    std::uniform_int_distribution<std::size_t> cell_pick(0, feasible.size() - 1);
    const Point2 spawn = feasible[cell_pick(rng)];
    const Point2 vel{(meet.x - spawn.x) / travel, (meet.y - spawn.y) / travel};
    const double ped_speed = std::hypot(vel.x, vel.y);
    const double ped_heading = ped_speed > 0.0 ? std::atan2(vel.y, vel.x) : 0.0;

    for (std::size_t k = 0; k < tracks.frame_count(); ++k) {
      const double tau = (static_cast<double>(k) - static_cast<double>(mid)) * dt;
      tracks.frames[k].push_back({pedestrian_id, ActorKind::pedestrian,
                                  {spawn.x + tau * vel.x, spawn.y + tau * vel.y, ped_heading},
                                  ctx.augment.pedestrian_footprint, ped_speed});
    }

    Scenario out = scn;
    out.tracks = std::move(tracks);
    const CriticalityReport report = assess_criticality(out, cands, ctx.sensor);
    if (report.unseen_actor_ids.count(pedestrian_id) == 0 || report.colliding_count == 0) continue;
    out.augmentation = AugmentationRecord{occluder_id, pedestrian_id, seed, attempt};
    return out;
  }
  throw Error("augmentation infeasible");
}

}  // namespace cobev
