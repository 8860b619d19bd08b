#include "cobev/track_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "cobev/error.hpp"

namespace cobev {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_double(const std::string& text, std::size_t line_no, const char* field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error("track csv line " + std::to_string(line_no) + ": bad " + field + " '" + text +
                "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TrackSet read_tracks_csv(std::istream& in, double dt) {
  std::string line;
  if (!std::getline(in, line)) throw Error("track csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (trim(line) != kTrackCsvHeader) throw Error("track csv: unexpected header '" + line + "'");

  struct Row {
    long frame;
    ActorState state;
  };
  std::vector<Row> rows;
  std::map<ActorId, std::vector<long>> frames_per_track;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 9) {
      throw Error("track csv line " + std::to_string(line_no) + ": expected 9 fields");
    }
    for (auto& s : f) s = trim(s);
    Row row{};
    row.state.actor_id = static_cast<ActorId>(parse_double(f[0], line_no, "track_id"));
    row.frame = static_cast<long>(parse_double(f[1], line_no, "frame"));
    row.state.kind = parse_actor_kind(f[2]);
    row.state.pose = {parse_double(f[3], line_no, "x"), parse_double(f[4], line_no, "y"),
                      normalize_angle(parse_double(f[5], line_no, "theta"))};
    row.state.speed = parse_double(f[6], line_no, "speed");
    row.state.footprint = default_footprint(row.state.kind);
    if (!f[7].empty()) row.state.footprint.length = parse_double(f[7], line_no, "length");
    if (!f[8].empty()) row.state.footprint.width = parse_double(f[8], line_no, "width");
    frames_per_track[row.state.actor_id].push_back(row.frame);
    rows.push_back(row);
  }

  for (auto& [id, frames] : frames_per_track) {
    std::sort(frames.begin(), frames.end());
    for (std::size_t i = 1; i < frames.size(); ++i) {
      if (frames[i] != frames[i - 1] + 1) {
        throw Error("track " + std::to_string(id) + " has non-contiguous frames");
      }
    }
  }

  TrackSet tracks;
  tracks.dt = dt;
  if (rows.empty()) return tracks;
  long min_frame = std::numeric_limits<long>::max(), max_frame = std::numeric_limits<long>::min();
  for (const auto& r : rows) {
    min_frame = std::min(min_frame, r.frame);
    max_frame = std::max(max_frame, r.frame);
  }
  tracks.frames.resize(static_cast<std::size_t>(max_frame - min_frame + 1));
  for (const auto& r : rows) tracks.frames[r.frame - min_frame].push_back(r.state);
  for (auto& f : tracks.frames) {
    std::stable_sort(f.begin(), f.end(),
                     [](const auto& a, const auto& b) { return a.actor_id < b.actor_id; });
  }
  tracks.validate();
  return tracks;
}

TrackSet load_tracks_csv(const std::string& path, double dt) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open track file '" + path + "'");
  return read_tracks_csv(in, dt);
}

void write_tracks_csv(std::ostream& out, const TrackSet& tracks) {
  out << kTrackCsvHeader << '\n';
  for (std::size_t k = 0; k < tracks.frames.size(); ++k) {
    auto frame = tracks.frames[k];
    std::stable_sort(frame.begin(), frame.end(),
                     [](const auto& a, const auto& b) { return a.actor_id < b.actor_id; });
    for (const auto& a : frame) {
      out << a.actor_id << ',' << k << ',' << to_string(a.kind) << ',' << format_double(a.pose.x)
          << ',' << format_double(a.pose.y) << ',' << format_double(a.pose.theta) << ','
          << format_double(a.speed) << ',' << format_double(a.footprint.length) << ','
          << format_double(a.footprint.width) << '\n';
    }
  }
}

void save_tracks_csv(const std::string& path, const TrackSet& tracks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write track file '" + path + "'");
  write_tracks_csv(out, tracks);
  if (!out) throw Error("failed writing track file '" + path + "'");
}

}  // namespace cobev
