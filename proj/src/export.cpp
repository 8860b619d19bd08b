#include "cobev/export.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "cobev/error.hpp"

namespace cobev {

namespace {

constexpr char kMagic[8] = {'C', 'O', 'B', 'E', 'V', 'P', 'L', '1'};

void put_u32le(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

std::uint32_t get_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw Error("truncated plane container");
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void write_planes(const std::string& path, std::uint32_t planes, const GridSpec& spec,
                  const std::vector<float>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(kMagic, sizeof(kMagic));
  put_u32le(out, planes);
  put_u32le(out, static_cast<std::uint32_t>(spec.width));
  put_u32le(out, static_cast<std::uint32_t>(spec.height));
  for (float v : values) put_u32le(out, std::bit_cast<std::uint32_t>(v));
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace

nlohmann::json grid_to_json(const GridSpec& spec) {
  return {{"center", {spec.center.x, spec.center.y, spec.center.theta}},
          {"resolution", spec.resolution},
          {"width", spec.width},
          {"height", spec.height}};
}

void save_confidence_maps(const ConfidenceMaps& maps, const std::string& base) {
  write_planes(base + ".bin", static_cast<std::uint32_t>(maps.horizon * kClassCount), maps.spec,
               maps.values);
  write_json(base + ".json",
             {{"grid", grid_to_json(maps.spec)},
              {"horizon", maps.horizon},
              {"classes", {"empty", "occupied", "shadow", "outOfRange"}},
              {"layout", "timestep, class, row, col"},
              {"dtype", "float32le"}});
}

ConfidenceMaps load_confidence_maps(const std::string& base) {
  std::ifstream meta_in(base + ".json");
  if (!meta_in) throw Error("cannot open '" + base + ".json'");
  const auto meta = nlohmann::json::parse(meta_in);
  const auto& g = meta.at("grid");
  GridSpec spec{{g.at("center")[0], g.at("center")[1], g.at("center")[2]},
                g.at("resolution"), g.at("width"), g.at("height")};
  ConfidenceMaps maps(spec, meta.at("horizon").get<int>());

  std::ifstream in(base + ".bin", std::ios::binary);
  if (!in) throw Error("cannot open '" + base + ".bin'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw Error("bad plane container magic");
  const auto planes = get_u32le(in);
  const auto width = get_u32le(in);
  const auto height = get_u32le(in);
  if (planes != static_cast<std::uint32_t>(maps.horizon * kClassCount) ||
      width != static_cast<std::uint32_t>(spec.width) ||
      height != static_cast<std::uint32_t>(spec.height)) {
    throw Error("plane container disagrees with its sidecar");
  }
  for (auto& v : maps.values) v = std::bit_cast<float>(get_u32le(in));
  return maps;
}

void save_costmap(const Costmap& cost, const std::string& base) {
  std::vector<float> values(cost.values.begin(), cost.values.end());
  write_planes(base + ".bin", static_cast<std::uint32_t>(cost.horizon), cost.spec, values);
  write_json(base + ".json", {{"grid", grid_to_json(cost.spec)},
                              {"horizon", cost.horizon},
                              {"quantity", "signed_distance_m"},
                              {"cap", cost.cap},
                              {"layout", "timestep, row, col"},
                              {"dtype", "float32le"}});
}

void write_candidates_csv(std::ostream& out, const CandidateSet& cands) {
  out << "candidate_id,step,x,y,theta\n";
  char buf[128];
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t t = 0; t < cands.candidates[i].size(); ++t) {
      const Pose2& p = cands.candidates[i][t];
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g,%.17g\n", i, t + 1, p.x, p.y, p.theta);
      out << buf;
    }
  }
}

nlohmann::json scenario_manifest(const Scenario& scn) {
  nlohmann::json j = {
      {"scenario_id", scn.id},
      {"source", scn.source},
      {"obs_frames", {scn.source_offset + scn.obs_first, scn.source_offset + scn.obs_last}},
      {"plan_frames", {scn.source_offset + scn.plan_first, scn.source_offset + scn.plan_last}},
      {"ego_id", scn.ego_id},
      {"comm_ids", scn.comm_ids},
  };
  if (scn.augmentation) {
    j["augmentation"] = {{"added_actor_ids",
                          {scn.augmentation->occluder_id, scn.augmentation->pedestrian_id}},
                         {"occluder_id", scn.augmentation->occluder_id},
                         {"pedestrian_id", scn.augmentation->pedestrian_id},
                         {"seed", scn.augmentation->seed},
                         {"attempts", scn.augmentation->attempts}};
  } else {
    j["augmentation"] = nullptr;
  }
  return j;
}

nlohmann::json round_log_json(const RoundLog& log) {
  nlohmann::json concerns = nlohmann::json::object();
  for (const auto& [id, w] : log.concerns) concerns[std::to_string(id)] = w;
  return {{"mode", to_string(log.cfg.mode)},
          {"policy", to_string(log.cfg.policy)},
          {"n_available", log.cfg.n_available},
          {"supporters", log.supporters},
          {"concerns", concerns},
          {"selected", log.selected},
          {"links_used", log.links_used},
          {"bytes_sent", log.bytes_sent},
          {"fused", log.fused},
          {"ranking", log.ranking}};
}

void write_message_trace(std::ostream& out, const std::vector<Message>& trace) {
  for (const auto& m : trace) {
    const nlohmann::json j = {{"kind", to_string(m.kind)},
                              {"sender", m.sender},
                              {"receiver", m.receiver},
                              {"payload_bytes", m.payload_bytes}};
    out << j.dump() << '\n';
  }
}

}  // namespace cobev
