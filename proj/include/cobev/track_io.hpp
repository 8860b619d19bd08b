#pragma once

#include <iosfwd>
#include <string>

#include "cobev/sim.hpp"

namespace cobev {

inline constexpr const char* kTrackCsvHeader = "track_id,frame,kind,x,y,theta,speed,length,width";

/// Reads the track CSV. Frame numbers are rebased so the smallest becomes 0.
/// Empty length/width fields fall back to the per-kind default footprint.
TrackSet read_tracks_csv(std::istream& in, double dt);
TrackSet load_tracks_csv(const std::string& path, double dt);

/// Rows ordered by frame, then actor id. Values printed with 17 significant
/// digits so a reload is exact.
void write_tracks_csv(std::ostream& out, const TrackSet& tracks);
void save_tracks_csv(const std::string& path, const TrackSet& tracks);

}  // namespace cobev
