#include <doctest.h>

#include "cobev/error.hpp"
#include "cobev/forecast.hpp"
#include "oracles.hpp"

using namespace cobev;

namespace {

ObservationRaster blank(const GridSpec& spec, CellClass c = CellClass::empty) {
  return {spec, std::vector<CellClass>(spec.cell_count(), c)};
}

}  // namespace

TEST_CASE("oracle forecast is one-hot and argmax reproduces the input") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> cls(0, 3);
  const GridSpec spec{{}, 0.5, 9, 7};
  std::vector<ObservationRaster> truth;
  for (int t = 0; t < 4; ++t) {
    auto r = blank(spec);
    for (auto& c : r.cells) c = static_cast<CellClass>(cls(rng));
    truth.push_back(r);
  }
  const auto maps = forecast_oracle(truth);
  CHECK(maps.horizon == 4);
  CHECK(maps.max_normalization_error() == 0.0);
  const auto masks = to_masks(maps);
  for (int t = 0; t < 4; ++t) {
    CHECK(std::equal(truth[t].cells.begin(), truth[t].cells.end(), masks.plane(t).begin()));
  }
  CHECK_THROWS_AS(forecast_oracle(std::vector<ObservationRaster>{}), Error);
  std::vector<ObservationRaster> mixed{blank(spec), blank(GridSpec{{}, 0.5, 9, 8})};
  CHECK_THROWS_AS(forecast_oracle(mixed), Error);
}

TEST_CASE("argmax ties resolve occupied, shadow, empty, outOfRange") {
  const GridSpec spec{{}, 1.0, 4, 1};
  ConfidenceMaps maps(spec, 1);
  auto set = [&](std::size_t cell, std::array<float, 4> p) {
    for (int c = 0; c < 4; ++c) maps.plane(0, static_cast<CellClass>(c))[cell] = p[c];
  };
  // Order of p: empty, occupied, shadow, out_of_range.
  set(0, {0.25f, 0.25f, 0.25f, 0.25f});
  set(1, {0.4f, 0.1f, 0.4f, 0.1f});
  set(2, {0.4f, 0.1f, 0.1f, 0.4f});
  set(3, {0.1f, 0.1f, 0.1f, 0.7f});
  const auto m = to_masks(maps);
  CHECK(m.plane(0)[0] == CellClass::occupied);
  CHECK(m.plane(0)[1] == CellClass::shadow);
  CHECK(m.plane(0)[2] == CellClass::empty);
  CHECK(m.plane(0)[3] == CellClass::out_of_range);
}

TEST_CASE("persistence moves a blob at constant velocity and keeps unknown cells") {
  const GridSpec spec{{}, 0.5, 20, 10};
  auto prev = blank(spec), last = blank(spec);
  prev.cells[spec.index(4, 3)] = prev.cells[spec.index(5, 3)] = CellClass::occupied;
  last.cells[spec.index(4, 4)] = last.cells[spec.index(5, 4)] = CellClass::occupied;
  last.cells[spec.index(0, 19)] = CellClass::shadow;
  last.cells[spec.index(9, 0)] = CellClass::out_of_range;
  PersistenceConfig cfg;
  cfg.horizon = 3;
  const std::vector<ObservationRaster> obs{prev, last};
  const auto maps = forecast_persistence(obs, cfg);
  CHECK(maps.max_normalization_error() < 1e-6);
  const auto masks = to_masks(maps);
  for (int t = 0; t < 3; ++t) {
    const auto plane = masks.plane(t);
    CHECK(plane[spec.index(4, 5 + t)] == CellClass::occupied);
    CHECK(plane[spec.index(5, 5 + t)] == CellClass::occupied);
    CHECK(plane[spec.index(4, 4 + t)] == CellClass::empty);
    CHECK(plane[spec.index(0, 19)] == CellClass::shadow);
    CHECK(plane[spec.index(9, 0)] == CellClass::out_of_range);
    CHECK(maps.at(t, CellClass::occupied, spec.index(4, 5 + t)) == doctest::Approx(0.9f));
  }
  CHECK_THROWS_AS(forecast_persistence(std::vector<ObservationRaster>{last}, cfg), Error);
}

TEST_CASE("causal oracle hides actors the viewer never saw") {
  const Scenario scn = oracle::hidden_pedestrian_scene();
  const GridSpec spec = anchored_grid(scn.ego_now().pose, 0.2, 128, 128);
  const auto ped_cell = *spec.cell_of_world({2.4, 0.0});
  const std::size_t idx = spec.index(ped_cell.row, ped_cell.col);
  const int t_contact = 4;

  const auto causal = to_masks(OracleForecaster{}.predict(scn, 1, spec));
  CHECK(causal.plane(t_contact)[idx] != CellClass::occupied);
  const auto full = to_masks(OracleForecaster({}, true).predict(scn, 1, spec));
  CHECK(full.plane(t_contact)[idx] == CellClass::occupied);
  const auto star = to_masks(OmniscientForecaster{}.predict(scn, 1, spec));
  CHECK(star.plane(t_contact)[idx] == CellClass::occupied);
  for (int t = 0; t < star.horizon; ++t) {
    for (auto c : star.plane(t)) {
      CHECK(c != CellClass::shadow);
      CHECK(c != CellClass::out_of_range);
    }
  }
  // The supporter saw the pedestrian, so its causal forecast keeps it.
  const GridSpec sup = anchored_grid(scn.tracks.at(29, 4).pose, 0.2, 128, 128);
  const auto sc = *sup.cell_of_world({2.4, 0.0});
  const auto supporter = to_masks(OracleForecaster{}.predict(scn, 4, sup));
  CHECK(supporter.plane(t_contact)[sup.index(sc.row, sc.col)] == CellClass::occupied);
}
