#include "cobev/protocol.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "cobev/error.hpp"

namespace cobev {

std::string to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::pose_broadcast: return "PoseBroadcast";
    case MessageKind::concern_reply: return "ConcernReply";
    case MessageKind::score_request: return "ScoreRequest";
    case MessageKind::score_reply: return "ScoreReply";
  }
  return "?";
}

Message make_pose_broadcast(ActorId sender, const Pose2& pose) {
  return {MessageKind::pose_broadcast, sender, kBroadcast, pose, kPoseBytes};
}

Message make_concern_reply(ActorId sender, ActorId receiver, double w) {
  return {MessageKind::concern_reply, sender, receiver, w, kScalarBytes};
}

Message make_score_request(ActorId sender, ActorId receiver) {
  return {MessageKind::score_request, sender, receiver, std::monostate{}, 0};
}

Message make_score_reply(ActorId sender, ActorId receiver, std::vector<TrajectoryStats> stats) {
  const std::size_t bytes = kStatsBytes * stats.size();
  return {MessageKind::score_reply, sender, receiver, std::move(stats), bytes};
}

void MessageBus::send(Message msg) {
  bytes_sent_ += msg.payload_bytes;
  trace_.push_back(msg);
  if (msg.receiver == kBroadcast) {
    for (auto id : agents_) {
      if (id != msg.sender) queue_.push_back({msg, id});
    }
  } else {
    const ActorId to = msg.receiver;
    queue_.push_back({std::move(msg), to});
  }
}

std::optional<Message> MessageBus::receive(ActorId receiver) {
  for (auto it = queue_.begin(); it != queue_.end(); ++it) {
    if (it->to == receiver) {
      Message msg = std::move(it->msg);
      queue_.erase(it);
      return msg;
    }
  }
  return std::nullopt;
}

std::string to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::ego_only: return "ego_only";
    case FusionMode::naive_all: return "naive_all";
    case FusionMode::selective: return "selective";
    case FusionMode::uncertainty: return "uncertainty";
  }
  return "?";
}

std::string to_string(SelectionPolicy policy) {
  switch (policy) {
    case SelectionPolicy::top1: return "top1";
    case SelectionPolicy::above_ego: return "above_ego";
    case SelectionPolicy::threshold: return "threshold";
    case SelectionPolicy::random: return "random";
  }
  return "?";
}

FusionMode parse_fusion_mode(const std::string& text) {
  for (auto m : {FusionMode::ego_only, FusionMode::naive_all, FusionMode::selective,
                 FusionMode::uncertainty}) {
    if (to_string(m) == text) return m;
  }
  throw Error("unknown fusion mode '" + text + "'");
}

SelectionPolicy parse_selection_policy(const std::string& text) {
  for (auto p : {SelectionPolicy::top1, SelectionPolicy::above_ego, SelectionPolicy::threshold,
                 SelectionPolicy::random}) {
    if (to_string(p) == text) return p;
  }
  throw Error("unknown selection policy '" + text + "'");
}

void FusionConfig::validate() const {
  if (n_available < 0) throw Error("n_available must be >= 0");
  if (policy == SelectionPolicy::threshold && threshold < 0.0) {
    throw Error("selection threshold must be >= 0");
  }
}

std::vector<std::vector<Pose2>> transform_candidates(const CandidateSet& cands,
                                                     const Pose2& ego_pose,
                                                     const Pose2& target_frame) {
  std::vector<std::vector<Pose2>> out;
  out.reserve(cands.size());
  for (const auto& traj : cands.candidates) {
    std::vector<Pose2> moved;
    moved.reserve(traj.size());
    for (const auto& p : traj) moved.push_back(relative(target_frame, compose(ego_pose, p)));
    out.push_back(std::move(moved));
  }
  return out;
}

double concern(const std::vector<TrajectoryStats>& stats) {
  double w = 0.0;
  for (const auto& s : stats) w += s.p_o;
  return w;
}

std::vector<ActorId> select_supporters(double w_ego, const std::map<ActorId, double>& w_supporters,
                                       SelectionPolicy policy, int n_available,
                                       double threshold) {
  if (static_cast<int>(w_supporters.size()) > n_available) {
    throw Error("more supporters than available links");
  }
  std::vector<ActorId> out;
  switch (policy) {
    case SelectionPolicy::top1: {
      // std::map iterates ids ascending, so strict > keeps the lowest id on ties.
      const std::pair<const ActorId, double>* best = nullptr;
      for (const auto& entry : w_supporters) {
        if (best == nullptr || entry.second > best->second) best = &entry;
      }
      if (best != nullptr && best->second > w_ego) out.push_back(best->first);
      break;
    }
    case SelectionPolicy::above_ego:
      for (const auto& [id, w] : w_supporters) {
        if (w > w_ego) out.push_back(id);
      }
      break;
    case SelectionPolicy::threshold:
      for (const auto& [id, w] : w_supporters) {
        if (w > threshold) out.push_back(id);
      }
      break;
    case SelectionPolicy::random:
      throw Error("random selection does not use concern scores");
  }
  return out;
}

double uncertainty_weight(const TrajectoryStats& s) {
  return (1.0 + s.f_o) * (1.0 + s.p_o) / ((1.0 + s.f_s) * (1.0 + s.p_s));
}

std::vector<double> fuse(const std::vector<TrajectoryStats>& ego_stats,
                         const std::map<ActorId, std::vector<TrajectoryStats>>& supporter_stats,
                         const FusionConfig& cfg) {
  const std::size_t n = ego_stats.size();
  for (const auto& [id, stats] : supporter_stats) {
    if (stats.size() != n) {
      throw Error("supporter " + std::to_string(id) + " sent " + std::to_string(stats.size()) +
                  " scores, expected " + std::to_string(n));
    }
  }
  // With nobody to fuse, every mode reduces to the ego's plain scores.
  const bool weighted = cfg.mode == FusionMode::uncertainty && !supporter_stats.empty();
  auto term = [weighted](const TrajectoryStats& s) {
    return weighted ? uncertainty_weight(s) * s.score : s.score;
  };
  std::vector<double> fused(n);
  for (std::size_t i = 0; i < n; ++i) {
    fused[i] = term(ego_stats[i]);
    if (cfg.mode == FusionMode::ego_only) continue;
    for (const auto& entry : supporter_stats) fused[i] += term(entry.second[i]);
  }
  return fused;
}

std::vector<int> prioritize(const std::vector<double>& fused) {
  std::vector<int> order(fused.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fused[static_cast<std::size_t>(a)] >
                                              fused[static_cast<std::size_t>(b)]; });
  return order;
}

AgentView build_agent_view(const Scenario& scn, ActorId viewer, const Forecaster& forecaster,
                           const RoundOptions& opts) {
  if (viewer != scn.ego_id) {
    // A supporter scores the ego's own motion, so the ego must not show up as
    // an obstacle on its grid.
    Scenario masked = scn;
    for (auto& frame : masked.tracks.frames) {
      std::erase_if(frame, [&](const ActorState& a) { return a.actor_id == scn.ego_id; });
    }
    return build_agent_view_raw(masked, viewer, forecaster, opts);
  }
  return build_agent_view_raw(scn, viewer, forecaster, opts);
}

AgentView build_agent_view_raw(const Scenario& scn, ActorId viewer, const Forecaster& forecaster,
                               const RoundOptions& opts) {
  AgentView view;
  view.id = viewer;
  const Pose2 pose = scn.tracks.at(scn.now_frame(), viewer).pose;
  const GridSpec spec =
      anchored_grid(pose, opts.grid.resolution, opts.grid.width, opts.grid.height);
  view.anchor = spec.center;
  view.maps = forecaster.predict(scn, viewer, spec);
  view.masks = to_masks(view.maps);
  view.cost = build_costmap(view.masks, opts.sdf_cap);
  return view;
}

std::vector<TrajectoryStats> score_candidates(const AgentView& view, const CandidateSet& cands,
                                              const Pose2& ego_pose, const Footprint& ego_fp) {
  const auto local = transform_candidates(cands, ego_pose, view.anchor);
  std::vector<TrajectoryStats> stats;
  stats.reserve(local.size());
  for (const auto& traj : local) {
    stats.push_back(score_trajectory(view.cost, view.masks, view.maps, traj, ego_fp));
  }
  return stats;
}

AgentViewCache::AgentViewCache(const Scenario& scn, std::shared_ptr<const Forecaster> forecaster,
                               RoundOptions opts)
    : scn_(scn), forecaster_(std::move(forecaster)), opts_(opts) {}

const AgentView& AgentViewCache::view(ActorId id) {
  auto it = views_.find(id);
  if (it == views_.end()) {
    it = views_.emplace(id, std::make_unique<AgentView>(
                                build_agent_view(scn_, id, *forecaster_, opts_))).first;
  }
  return *it->second;
}

const std::vector<TrajectoryStats>& AgentViewCache::scores(ActorId id, const CandidateSet& cands,
                                                           const Pose2& ego_pose,
                                                           const Footprint& ego_fp) {
  const auto same = [](const Pose2& a, const Pose2& b) {
    return a.x == b.x && a.y == b.y && a.theta == b.theta;
  };
  auto it = scores_.find(id);
  bool hit = it != scores_.end() && same(it->second.pose, ego_pose) &&
             it->second.fp.length == ego_fp.length && it->second.fp.width == ego_fp.width &&
             it->second.cands.size() == cands.size();
  for (std::size_t i = 0; hit && i < cands.size(); ++i) {
    hit = std::equal(cands.candidates[i].begin(), cands.candidates[i].end(),
                     it->second.cands[i].begin(), it->second.cands[i].end(), same);
  }
  if (!hit) {
    scores_[id] = {cands.candidates, ego_pose, ego_fp,
                   score_candidates(view(id), cands, ego_pose, ego_fp)};
    it = scores_.find(id);
  }
  return it->second.stats;
}

std::vector<ActorId> available_supporters(const Scenario& scn, int n_available) {
  auto out = scn.supporters();
  std::sort(out.begin(), out.end());
  if (static_cast<int>(out.size()) > n_available) {
    out.resize(static_cast<std::size_t>(std::max(0, n_available)));
  }
  return out;
}

RoundLog run_round(const Scenario& scn, const CandidateSet& cands, AgentViewCache& views,
                   const FusionConfig& cfg) {
  cfg.validate();
  RoundLog log;
  log.cfg = cfg;
  const ActorState& ego = scn.ego_now();
  const auto& ego_stats = views.scores(ego.actor_id, cands, ego.pose, ego.footprint);
  std::map<ActorId, std::vector<TrajectoryStats>> received;

  if (cfg.mode != FusionMode::ego_only) {
    log.supporters = available_supporters(scn, cfg.n_available);
  }
  if (!log.supporters.empty()) {
    MessageBus bus;
    bus.register_agent(ego.actor_id);
    for (auto id : log.supporters) bus.register_agent(id);

    const bool exchange_concern =
        cfg.mode != FusionMode::naive_all && cfg.policy != SelectionPolicy::random;
    const double w_ego = concern(ego_stats);
    log.concerns[ego.actor_id] = w_ego;

    // 1. ego announces its pose; 2-4. supporters score the shared candidates.
    bus.send(make_pose_broadcast(ego.actor_id, ego.pose));
    std::map<ActorId, std::vector<TrajectoryStats>> local_stats;
    for (auto id : log.supporters) {
      const auto msg = bus.receive(id);
      const Pose2 target = std::get<Pose2>(msg->payload);
      local_stats[id] = views.scores(id, cands, target, ego.footprint);
      // 5. concern scalar back to the ego.
      if (exchange_concern) bus.send(make_concern_reply(id, ego.actor_id, concern(local_stats[id])));
    }
    std::map<ActorId, double> w_supporters;
    if (exchange_concern) {
      while (auto msg = bus.receive(ego.actor_id)) {
        w_supporters[msg->sender] = std::get<double>(msg->payload);
      }
      log.concerns.insert(w_supporters.begin(), w_supporters.end());
    }

    if (cfg.mode == FusionMode::naive_all) {
      log.selected = log.supporters;
    } else if (cfg.policy == SelectionPolicy::random) {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_int_distribution<std::size_t> pick(0, log.supporters.size() - 1);
      log.selected = {log.supporters[pick(rng)]};
    } else {
      log.selected = select_supporters(w_ego, w_supporters, cfg.policy,
                                       static_cast<int>(log.supporters.size()), cfg.threshold);
    }

    for (auto id : log.selected) bus.send(make_score_request(ego.actor_id, id));
    for (auto id : log.selected) {
      const auto msg = bus.receive(id);
      if (!msg || msg->kind != MessageKind::score_request) throw Error("protocol out of order");
      bus.send(make_score_reply(id, ego.actor_id, local_stats[id]));
    }
    while (auto msg = bus.receive(ego.actor_id)) {
      if (msg->kind == MessageKind::score_reply) {
        received[msg->sender] = std::get<std::vector<TrajectoryStats>>(msg->payload);
      }
    }
    log.links_used = static_cast<int>(log.selected.size());
    log.bytes_sent = bus.bytes_sent();
    log.trace = bus.trace();
  }

  // 6-7. fuse and rank.
  log.fused = fuse(ego_stats, received, cfg);
  log.ranking = prioritize(log.fused);
  return log;
}

RoundLog run_round(const Scenario& scn, const CandidateSet& cands,
                   std::shared_ptr<const Forecaster> forecaster, const FusionConfig& cfg,
                   const RoundOptions& opts) {
  AgentViewCache views(scn, std::move(forecaster), opts);
  return run_round(scn, cands, views, cfg);
}

}  // namespace cobev
