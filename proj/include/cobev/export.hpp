#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cobev/costmap.hpp"
#include "cobev/forecast.hpp"
#include "cobev/protocol.hpp"
#include "cobev/scenario.hpp"

namespace cobev {

/// Plane container: 8-byte magic "COBEVPL1", u32 plane count, u32 width,
/// u32 height, then float32 planes, all little-endian. The JSON sidecar at
/// `<base>.json` carries grid, horizon and plane order.
void save_confidence_maps(const ConfidenceMaps& maps, const std::string& base);
ConfidenceMaps load_confidence_maps(const std::string& base);
void save_costmap(const Costmap& cost, const std::string& base);

nlohmann::json grid_to_json(const GridSpec& spec);

void write_candidates_csv(std::ostream& out, const CandidateSet& cands);

nlohmann::json scenario_manifest(const Scenario& scn);

/// Stable key order; doubles printed round-trip exact.
nlohmann::json round_log_json(const RoundLog& log);
/// One JSON object per line: kind, sender, receiver, payload_bytes.
void write_message_trace(std::ostream& out, const std::vector<Message>& trace);

}  // namespace cobev
