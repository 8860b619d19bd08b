#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cobev/sim.hpp"

namespace cobev {

struct WindowConfig {
  double obs_s = 3.0;
  double plan_s = 1.0;

  int obs_frames(double dt) const;
  int plan_frames(double dt) const;
};

struct AugmentationRecord {
  ActorId occluder_id = 0;
  ActorId pedestrian_id = 0;
  std::uint64_t seed = 0;
  int attempts = 0;
};

/// One observation + planning window cut out of a longer recording. Frame
/// indices are local to `tracks`; `source_offset` maps them back.
struct Scenario {
  int id = 0;
  std::string source;
  std::size_t source_offset = 0;
  TrackSet tracks;
  ActorId ego_id = 0;
  std::vector<ActorId> comm_ids;  // ascending, contains ego_id
  std::size_t obs_first = 0;
  std::size_t obs_last = 0;
  std::size_t plan_first = 0;
  std::size_t plan_last = 0;
  std::optional<AugmentationRecord> augmentation;

  /// Frame of t = 0 (last observation frame).
  std::size_t now_frame() const { return obs_last; }
  int horizon() const { return static_cast<int>(plan_last - plan_first + 1); }
  const ActorState& ego_now() const { return tracks.at(now_frame(), ego_id); }
  std::vector<ActorId> supporters() const;
  void validate() const;
};

struct CandidateConfig {
  int n_accel = 8;
  int n_yaw_rate = 8;
  double accel_min = -4.0;
  double accel_max = 2.0;
  double yaw_rate_min = -0.5;
  double yaw_rate_max = 0.5;
  int substeps = 20;

  int count() const { return n_accel * n_yaw_rate; }
  void validate() const;
};

/// Shared library of local trajectories, poses in the ego frame at t = 0.
struct CandidateSet {
  double dt = 0.1;
  std::vector<std::vector<Pose2>> candidates;  // N x T+
  std::vector<std::vector<double>> speeds;     // N x T+
  std::vector<double> accel;                   // per candidate
  std::vector<double> yaw_rate;                // per candidate

  std::size_t size() const { return candidates.size(); }
  int horizon() const {
    return candidates.empty() ? 0 : static_cast<int>(candidates.front().size());
  }
};

/// Unicycle roll-out for every (accel, yaw rate) pair on the configured grid;
/// candidate id = accel_index * n_yaw_rate + yaw_index.
CandidateSet generate_candidates(double initial_speed, double dt, int horizon,
                                 const CandidateConfig& cfg = {});

CandidateSet scenario_candidates(const Scenario& scn, const CandidateConfig& cfg = {});

/// Candidate poses lifted into the world frame through the ego pose at t = 0.
std::vector<std::vector<Pose2>> candidates_in_world(const Scenario& scn,
                                                    const CandidateSet& cands);

struct SliceConfig {
  WindowConfig windows;
  int comm_count = 4;
};

std::vector<Scenario> slice_scenarios(const TrackSet& tracks, int stride, std::uint64_t seed,
                                      const SliceConfig& cfg = {});

struct CriticalityReport {
  std::vector<bool> collides_with_unseen;
  int colliding_count = 0;
  std::set<ActorId> unseen_actor_ids;
};

CriticalityReport assess_criticality(const Scenario& scn, const CandidateSet& cands,
                                     const SensorConfig& sensor = {});

/// Ground-truth per-candidate collision flags against every other actor over
/// the planning window.
std::vector<bool> candidate_collisions(const Scenario& scn, const CandidateSet& cands);

struct AugmentConfig {
  double occluder_offset_min = 5.0;
  double occluder_offset_max = 10.0;
  Footprint occluder_footprint{4.5, 2.0};
  Footprint pedestrian_footprint{0.6, 0.6};
  double pedestrian_max_speed = 3.0;
  int max_attempts = 100;
  /// When the occluder center crosses the ego heading axis, as a fraction of
  /// the observation window (0 = first frame, 1 = t = 0). Offsets, shadow and
  /// pedestrian spawn all refer to that frame.
  double crossing_fraction = 0.85;
  /// <= 0 derives the speed that sweeps the body across the ego corridor in a
  /// third of the observation window.
  double occluder_speed = 3.0;
  /// Candidate whose path the pedestrian intercepts; -1 picks the one closest
  /// to the ego's recorded path.
  int target_candidate = -1;

  void validate() const;
};

struct AugmentContext {
  GridConfig grid;
  SensorConfig sensor;
  CandidateConfig candidates;
  AugmentConfig augment;
};

/// Adds a crossing occluder and a pedestrian hidden in its shadow that meets
/// the ego's path during the planning window. Throws "augmentation infeasible"
/// when no placement works and rejects scenarios that are already critical.
Scenario augment_adversarial(const Scenario& scn, std::uint64_t seed,
                             const AugmentContext& ctx = {});

/// counts[x] = number of reports with colliding_count == x, x in [0, n].
std::vector<std::size_t> criticality_histogram(const std::vector<CriticalityReport>& reports,
                                               int n_candidates);

/// Deterministic per-scenario stream derived from a global seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cobev
