#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cobev/scenario.hpp"
#include "cobev/sim.hpp"

namespace cobev {

/// Per-timestep, per-class confidences. Layout: values[(t * 4 + class) * cells + cell].
struct ConfidenceMaps {
  GridSpec spec;
  int horizon = 0;
  std::vector<float> values;

  ConfidenceMaps() = default;
  ConfidenceMaps(const GridSpec& spec, int horizon);

  std::span<float> plane(int t, CellClass c);
  std::span<const float> plane(int t, CellClass c) const;
  float at(int t, CellClass c, std::size_t cell) const { return plane(t, c)[cell]; }
  /// Largest |sum_c P_c - 1| over all cells and timesteps.
  double max_normalization_error() const;
  bool operator==(const ConfidenceMaps&) const = default;
};

/// Argmax labels per timestep. Layout: cells[t * cell_count + cell].
struct SemanticMasks {
  GridSpec spec;
  int horizon = 0;
  std::vector<CellClass> cells;

  std::span<const CellClass> plane(int t) const;
};

/// Throws when the list is empty or the rasters disagree on their grid.
void check_observations(std::span<const ObservationRaster> observations);

/// One-hot confidences reproducing the given future rasters.
ConfidenceMaps forecast_oracle(std::span<const ObservationRaster> truth);

struct PersistenceConfig {
  int horizon = 10;
  float occupied_confidence = 0.9f;
  float persisted_confidence = 0.8f;  // shadow / outOfRange carried forward
  float empty_confidence = 0.9f;
  double max_match_distance_m = 3.0;  // centroid association gate
};

/// Constant-velocity propagation of occupied blobs from the last two frames.
ConfidenceMaps forecast_persistence(std::span<const ObservationRaster> observations,
                                    const PersistenceConfig& cfg = {});

/// Ties resolve in the order occupied, shadow, empty, outOfRange.
SemanticMasks to_masks(const ConfidenceMaps& maps);

/// Produces an agent's confidence maps over a scenario's planning window.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::string name() const = 0;
  virtual ConfidenceMaps predict(const Scenario& scn, ActorId viewer,
                                 const GridSpec& spec) const = 0;
};

/// Forwards the viewer's own future renderings. Actors the viewer never hit
/// with a ray during the observation window are left out of those renderings
/// unless `include_unobserved` is set, since no forecaster could know them.
class OracleForecaster final : public Forecaster {
 public:
  explicit OracleForecaster(SensorConfig sensor = {}, bool include_unobserved = false)
      : sensor_(sensor), include_unobserved_(include_unobserved) {}
  std::string name() const override { return "oracle"; }
  ConfidenceMaps predict(const Scenario& scn, ActorId viewer, const GridSpec& spec) const override;

 private:
  SensorConfig sensor_;
  bool include_unobserved_;
};

/// Ground-truth future with every actor visible (no shadow, no outOfRange).
class OmniscientForecaster final : public Forecaster {
 public:
  std::string name() const override { return "omniscient"; }
  ConfidenceMaps predict(const Scenario& scn, ActorId viewer, const GridSpec& spec) const override;
};

/// Renders the last `history` observation frames and runs forecast_persistence.
class PersistenceForecaster final : public Forecaster {
 public:
  explicit PersistenceForecaster(SensorConfig sensor = {}, PersistenceConfig cfg = {},
                                 int history = 2)
      : sensor_(sensor), cfg_(cfg), history_(history) {}
  std::string name() const override { return "persistence"; }
  ConfidenceMaps predict(const Scenario& scn, ActorId viewer, const GridSpec& spec) const override;

 private:
  SensorConfig sensor_;
  PersistenceConfig cfg_;
  int history_;
};

/// Future rasters for `viewer` over the planning window, rendered with only the
/// listed actors (plus the viewer) present.
std::vector<ObservationRaster> render_future(const Scenario& scn, ActorId viewer,
                                             const GridSpec& spec, const SensorConfig& sensor,
                                             const std::set<ActorId>* keep);

}  // namespace cobev
