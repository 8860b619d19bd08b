#include "cobev/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cobev/error.hpp"

namespace cobev {

ConfidenceMaps::ConfidenceMaps(const GridSpec& s, int h)
    : spec(s), horizon(h), values(static_cast<std::size_t>(h) * kClassCount * s.cell_count(), 0.0f) {}

std::span<float> ConfidenceMaps::plane(int t, CellClass c) {
  const std::size_t n = spec.cell_count();
  return {values.data() + (static_cast<std::size_t>(t) * kClassCount + static_cast<int>(c)) * n, n};
}

std::span<const float> ConfidenceMaps::plane(int t, CellClass c) const {
  const std::size_t n = spec.cell_count();
  return {values.data() + (static_cast<std::size_t>(t) * kClassCount + static_cast<int>(c)) * n, n};
}

double ConfidenceMaps::max_normalization_error() const {
  double worst = 0.0;
  const std::size_t n = spec.cell_count();
  for (int t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int c = 0; c < kClassCount; ++c) sum += plane(t, static_cast<CellClass>(c))[i];
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return worst;
}

std::span<const CellClass> SemanticMasks::plane(int t) const {
  const std::size_t n = spec.cell_count();
  return {cells.data() + static_cast<std::size_t>(t) * n, n};
}

void check_observations(std::span<const ObservationRaster> observations) {
  if (observations.empty()) throw Error("no observations");
  for (const auto& o : observations) {
    if (!(o.spec == observations.front().spec)) throw Error("observation grids differ");
    if (o.cells.size() != o.spec.cell_count()) throw Error("observation raster size mismatch");
  }
}

ConfidenceMaps forecast_oracle(std::span<const ObservationRaster> truth) {
  check_observations(truth);
  ConfidenceMaps maps(truth.front().spec, static_cast<int>(truth.size()));
  for (int t = 0; t < maps.horizon; ++t) {
    const auto& raster = truth[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < raster.cells.size(); ++i) {
      maps.plane(t, raster.cells[i])[i] = 1.0f;
    }
  }
  return maps;
}

namespace {

struct Blob {
  std::vector<std::size_t> cells;
  double row = 0.0;  // centroid
  double col = 0.0;
};

std::vector<Blob> occupied_blobs(const ObservationRaster& raster) {
  const GridSpec& spec = raster.spec;
  std::vector<int> label(raster.cells.size(), -1);
  std::vector<Blob> blobs;
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < raster.cells.size(); ++seed) {
    if (raster.cells[seed] != CellClass::occupied || label[seed] >= 0) continue;
    Blob blob;
    const int id = static_cast<int>(blobs.size());
    label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      blob.cells.push_back(idx);
      const Cell c = spec.cell_at(idx);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int r = c.row + dr, col = c.col + dc;
          if (!spec.in_bounds(r, col)) continue;
          const std::size_t n = spec.index(r, col);
          if (raster.cells[n] == CellClass::occupied && label[n] < 0) {
            label[n] = id;
            stack.push_back(n);
          }
        }
      }
    }
    std::sort(blob.cells.begin(), blob.cells.end());
    for (auto idx : blob.cells) {
      const Cell c = spec.cell_at(idx);
      blob.row += c.row;
      blob.col += c.col;
    }
    blob.row /= static_cast<double>(blob.cells.size());
    blob.col /= static_cast<double>(blob.cells.size());
    blobs.push_back(std::move(blob));
  }
  return blobs;
}

void set_cell(ConfidenceMaps& maps, int t, std::size_t cell, CellClass cls, float confidence) {
  const float rest = (1.0f - confidence) / static_cast<float>(kClassCount - 1);
  for (int c = 0; c < kClassCount; ++c) {
    maps.plane(t, static_cast<CellClass>(c))[cell] =
        static_cast<CellClass>(c) == cls ? confidence : rest;
  }
}

}  // namespace

ConfidenceMaps forecast_persistence(std::span<const ObservationRaster> observations,
                                    const PersistenceConfig& cfg) {
  check_observations(observations);
  if (observations.size() < 2) throw Error("insufficient history");
  if (cfg.horizon < 1) throw Error("forecast horizon must be >= 1");
  const ObservationRaster& last = observations[observations.size() - 1];
  const ObservationRaster& prev = observations[observations.size() - 2];
  const GridSpec& spec = last.spec;

  const auto now = occupied_blobs(last);
  const auto before = occupied_blobs(prev);
  const double gate_cells = cfg.max_match_distance_m / spec.resolution;
  // Per-frame centroid displacement (rows, cols) of each current blob.
  std::vector<std::pair<double, double>> velocity(now.size(), {0.0, 0.0});
  for (std::size_t b = 0; b < now.size(); ++b) {
    double best = gate_cells;
    for (const auto& p : before) {
      const double d = std::hypot(now[b].row - p.row, now[b].col - p.col);
      if (d <= best) {
        best = d;
        velocity[b] = {now[b].row - p.row, now[b].col - p.col};
      }
    }
  }

  ConfidenceMaps maps(spec, cfg.horizon);
  for (int t = 0; t < cfg.horizon; ++t) {
    for (std::size_t i = 0; i < spec.cell_count(); ++i) {
      const CellClass c = last.cells[i];
      if (c == CellClass::shadow || c == CellClass::out_of_range) {
        set_cell(maps, t, i, c, cfg.persisted_confidence);
      } else {
        set_cell(maps, t, i, CellClass::empty, cfg.empty_confidence);
      }
    }
    const int step = t + 1;
    for (std::size_t b = 0; b < now.size(); ++b) {
      const int dr = static_cast<int>(std::lround(step * velocity[b].first));
      const int dc = static_cast<int>(std::lround(step * velocity[b].second));
      for (auto idx : now[b].cells) {
        const Cell c = spec.cell_at(idx);
        if (!spec.in_bounds(c.row + dr, c.col + dc)) continue;
        set_cell(maps, t, spec.index(c.row + dr, c.col + dc), CellClass::occupied,
                 cfg.occupied_confidence);
      }
    }
  }
  return maps;
}

SemanticMasks to_masks(const ConfidenceMaps& maps) {
  static constexpr CellClass kPriority[kClassCount] = {CellClass::occupied, CellClass::shadow,
                                                       CellClass::empty, CellClass::out_of_range};
  SemanticMasks masks{maps.spec, maps.horizon, {}};
  const std::size_t n = maps.spec.cell_count();
  masks.cells.resize(static_cast<std::size_t>(maps.horizon) * n);
  for (int t = 0; t < maps.horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      CellClass best = kPriority[0];
      float best_value = maps.at(t, best, i);
      for (int k = 1; k < kClassCount; ++k) {
        const float v = maps.at(t, kPriority[k], i);
        if (v > best_value) {
          best = kPriority[k];
          best_value = v;
        }
      }
      masks.cells[static_cast<std::size_t>(t) * n + i] = best;
    }
  }
  return masks;
}

std::vector<ObservationRaster> render_future(const Scenario& scn, ActorId viewer,
                                             const GridSpec& spec, const SensorConfig& sensor,
                                             const std::set<ActorId>* keep) {
  std::vector<ObservationRaster> out;
  for (std::size_t k = scn.plan_first; k <= scn.plan_last; ++k) {
    const ActorState& self = scn.tracks.at(k, viewer);
    Frame frame;
    for (const auto& a : scn.tracks.frames[k]) {
      if (a.actor_id == viewer || keep == nullptr || keep->count(a.actor_id) != 0) {
        frame.push_back(a);
      }
    }
    const auto obstacles = obstacles_excluding(frame, viewer);
    const LidarScan scan = raycast(self.pose, obstacles, sensor.n_rays, sensor.max_range);
    out.push_back(render_observation(self, frame, scan, spec));
  }
  return out;
}

ConfidenceMaps OracleForecaster::predict(const Scenario& scn, ActorId viewer,
                                         const GridSpec& spec) const {
  if (include_unobserved_) return forecast_oracle(render_future(scn, viewer, spec, sensor_, nullptr));
  const auto seen = visible_actor_ids(scn.tracks, viewer, scn.obs_first, scn.obs_last, sensor_);
  auto future = render_future(scn, viewer, spec, sensor_, &seen);
  // Whatever the viewer could not see at t = 0 stays unknown unless a known
  // actor moves into it.
  const auto last =
      observation_sequence(scn.tracks, viewer, scn.obs_last, scn.obs_last, spec, sensor_).front();
  for (auto& raster : future) {
    for (std::size_t i = 0; i < raster.cells.size(); ++i) {
      const CellClass before = last.cells[i];
      if (raster.cells[i] == CellClass::empty &&
          (before == CellClass::shadow || before == CellClass::out_of_range)) {
        raster.cells[i] = before;
      }
    }
  }
  return forecast_oracle(future);
}

ConfidenceMaps OmniscientForecaster::predict(const Scenario& scn, ActorId viewer,
                                             const GridSpec& spec) const {
  std::vector<ObservationRaster> truth;
  for (std::size_t k = scn.plan_first; k <= scn.plan_last; ++k) {
    truth.push_back(render_omniscient(scn.tracks.at(k, viewer), scn.tracks.frames[k], spec));
  }
  return forecast_oracle(truth);
}

ConfidenceMaps PersistenceForecaster::predict(const Scenario& scn, ActorId viewer,
                                              const GridSpec& spec) const {
  const std::size_t span = static_cast<std::size_t>(std::max(2, history_));
  const std::size_t first =
      scn.obs_last + 1 >= span + scn.obs_first ? scn.obs_last + 1 - span : scn.obs_first;
  const auto obs = observation_sequence(scn.tracks, viewer, first, scn.obs_last, spec, sensor_);
  PersistenceConfig cfg = cfg_;
  cfg.horizon = scn.horizon();
  return forecast_persistence(obs, cfg);
}

}  // namespace cobev
