#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cobev/costmap.hpp"
#include "cobev/forecast.hpp"
#include "cobev/scenario.hpp"

namespace cobev {

enum class MessageKind : std::uint8_t { pose_broadcast, concern_reply, score_request, score_reply };
std::string to_string(MessageKind kind);

inline constexpr ActorId kBroadcast = -1;
inline constexpr std::size_t kScalarBytes = 8;
inline constexpr std::size_t kPoseBytes = 3 * kScalarBytes;
inline constexpr std::size_t kStatsBytes = 5 * kScalarBytes;

using Payload = std::variant<std::monostate, Pose2, double, std::vector<TrajectoryStats>>;

struct Message {
  MessageKind kind = MessageKind::pose_broadcast;
  ActorId sender = 0;
  ActorId receiver = kBroadcast;
  Payload payload;
  std::size_t payload_bytes = 0;
};

Message make_pose_broadcast(ActorId sender, const Pose2& pose);
Message make_concern_reply(ActorId sender, ActorId receiver, double w);
Message make_score_request(ActorId sender, ActorId receiver);
Message make_score_reply(ActorId sender, ActorId receiver, std::vector<TrajectoryStats> stats);

/// In-process FIFO with a full trace. Broadcasts are delivered to every
/// registered agent except the sender and counted once.
class MessageBus {
 public:
  void send(Message msg);
  /// Oldest pending message for `receiver` (broadcasts included).
  std::optional<Message> receive(ActorId receiver);
  void register_agent(ActorId id) { agents_.push_back(id); }

  std::size_t bytes_sent() const { return bytes_sent_; }
  const std::vector<Message>& trace() const { return trace_; }

 private:
  struct Pending {
    Message msg;
    ActorId to;
  };
  std::vector<ActorId> agents_;
  std::deque<Pending> queue_;
  std::vector<Message> trace_;
  std::size_t bytes_sent_ = 0;
};

enum class FusionMode : std::uint8_t { ego_only, naive_all, selective, uncertainty };
enum class SelectionPolicy : std::uint8_t { top1, above_ego, threshold, random };

std::string to_string(FusionMode mode);
std::string to_string(SelectionPolicy policy);
FusionMode parse_fusion_mode(const std::string& text);
SelectionPolicy parse_selection_policy(const std::string& text);

struct FusionConfig {
  FusionMode mode = FusionMode::ego_only;
  SelectionPolicy policy = SelectionPolicy::above_ego;
  double threshold = 0.0;  // tau for SelectionPolicy::threshold
  int n_available = 0;
  std::uint64_t seed = 0;  // SelectionPolicy::random

  void validate() const;
};

/// Candidate poses lifted to the world through `ego_pose` and re-expressed in
/// the frame of `target_frame`.
std::vector<std::vector<Pose2>> transform_candidates(const CandidateSet& cands,
                                                     const Pose2& ego_pose,
                                                     const Pose2& target_frame);

/// Sum of p_o over all candidates.
double concern(const std::vector<TrajectoryStats>& stats);

std::vector<ActorId> select_supporters(double w_ego, const std::map<ActorId, double>& w_supporters,
                                       SelectionPolicy policy, int n_available,
                                       double threshold = 0.0);

/// (1 + f_o)(1 + p_o) / ((1 + f_s)(1 + p_s))
double uncertainty_weight(const TrajectoryStats& stats);

std::vector<double> fuse(const std::vector<TrajectoryStats>& ego_stats,
                         const std::map<ActorId, std::vector<TrajectoryStats>>& supporter_stats,
                         const FusionConfig& cfg);

/// Candidate ids by fused score, largest first; ties by id.
std::vector<int> prioritize(const std::vector<double>& fused);

/// One agent's forecast products on its own grid.
struct AgentView {
  ActorId id = 0;
  Pose2 anchor;
  ConfidenceMaps maps;
  SemanticMasks masks;
  Costmap cost;
};

struct RoundOptions {
  GridConfig grid;
  double sdf_cap = kDefaultSdfCap;
};

/// Forecast products of `viewer`. For a supporter the ego is removed from the
/// scene first; build_agent_view_raw keeps every actor.
AgentView build_agent_view(const Scenario& scn, ActorId viewer, const Forecaster& forecaster,
                           const RoundOptions& opts = {});
AgentView build_agent_view_raw(const Scenario& scn, ActorId viewer, const Forecaster& forecaster,
                               const RoundOptions& opts = {});

/// Stats for every candidate of the ego (given in ego frame at t = 0) on the
/// agent's own grid.
std::vector<TrajectoryStats> score_candidates(const AgentView& view, const CandidateSet& cands,
                                              const Pose2& ego_pose, const Footprint& ego_fp);

/// Lazily builds and keeps agent views of one scenario.
class AgentViewCache {
 public:
  AgentViewCache(const Scenario& scn, std::shared_ptr<const Forecaster> forecaster,
                 RoundOptions opts = {});
  const AgentView& view(ActorId id);
  /// score_candidates on view(id), memoized per agent for repeated rounds
  /// over the same candidate set and ego state.
  const std::vector<TrajectoryStats>& scores(ActorId id, const CandidateSet& cands,
                                             const Pose2& ego_pose, const Footprint& ego_fp);
  const Scenario& scenario() const { return scn_; }

 private:
  struct Scored {
    std::vector<std::vector<Pose2>> cands;
    Pose2 pose;
    Footprint fp;
    std::vector<TrajectoryStats> stats;
  };
  const Scenario& scn_;
  std::shared_ptr<const Forecaster> forecaster_;
  RoundOptions opts_;
  std::map<ActorId, std::unique_ptr<AgentView>> views_;
  std::map<ActorId, Scored> scores_;
};

struct RoundLog {
  FusionConfig cfg;
  std::vector<ActorId> supporters;  // available after the n_available cap
  std::map<ActorId, double> concerns;
  std::vector<ActorId> selected;
  int links_used = 0;
  std::size_t bytes_sent = 0;
  std::vector<double> fused;
  std::vector<int> ranking;
  std::vector<Message> trace;
};

/// Supporters actually reachable in a round: the scenario's comm ids minus the
/// ego, lowest ids first, capped at n_available.
std::vector<ActorId> available_supporters(const Scenario& scn, int n_available);

RoundLog run_round(const Scenario& scn, const CandidateSet& cands, AgentViewCache& views,
                   const FusionConfig& cfg);
RoundLog run_round(const Scenario& scn, const CandidateSet& cands,
                   std::shared_ptr<const Forecaster> forecaster, const FusionConfig& cfg,
                   const RoundOptions& opts = {});

}  // namespace cobev
