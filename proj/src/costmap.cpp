#include "cobev/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cobev/error.hpp"

namespace cobev {

namespace {

constexpr double kFar = 1e20;

// Squared distance transform of a sampled function along one line
// (lower envelope of parabolas).
void distance_transform_1d(const double* f, double* d, int n, std::vector<int>& v,
                           std::vector<double>& z) {
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = 0.0;
    while (true) {
      const int p = v[static_cast<std::size_t>(k)];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s > z[static_cast<std::size_t>(k)]) break;
      --k;  // z[0] = -inf stops this at k = 0
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    d[q] = static_cast<double>(q - p) * (q - p) + f[p];
  }
}

// Squared cell distance to the nearest seed cell; >= kFar when no seeds.
std::vector<double> squared_edt(const std::vector<char>& seed, int width, int height) {
  std::vector<double> grid(seed.size());
  for (std::size_t i = 0; i < seed.size(); ++i) grid[i] = seed[i] ? 0.0 : kFar;
  std::vector<int> v;
  std::vector<double> z;
  const int longest = std::max(width, height);
  std::vector<double> f(static_cast<std::size_t>(longest)), d(static_cast<std::size_t>(longest));
  for (int col = 0; col < width; ++col) {
    for (int row = 0; row < height; ++row) f[row] = grid[static_cast<std::size_t>(row) * width + col];
    distance_transform_1d(f.data(), d.data(), height, v, z);
    for (int row = 0; row < height; ++row) grid[static_cast<std::size_t>(row) * width + col] = d[row];
  }
  for (int row = 0; row < height; ++row) {
    double* line = grid.data() + static_cast<std::size_t>(row) * width;
    std::copy(line, line + width, f.begin());
    distance_transform_1d(f.data(), d.data(), width, v, z);
    std::copy(d.begin(), d.begin() + width, line);
  }
  return grid;
}

}  // namespace

std::vector<double> signed_distance(std::span<const std::uint8_t> occupied, int width,
                                    int height, double resolution) {
  if (width <= 0 || height <= 0) throw Error("sdf grid dimensions must be positive");
  if (occupied.size() != static_cast<std::size_t>(width) * height) {
    throw Error("sdf mask size mismatch");
  }
  std::vector<char> occ(occupied.size()), free(occupied.size());
  bool any_occ = false, any_free = false;
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    occ[i] = occupied[i] != 0;
    free[i] = !occ[i];
    any_occ = any_occ || occ[i];
    any_free = any_free || free[i];
  }
  const auto to_occ = any_occ ? squared_edt(occ, width, height) : std::vector<double>();
  const auto to_free = any_free ? squared_edt(free, width, height) : std::vector<double>();
  std::vector<double> out(occupied.size());
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    if (occ[i]) {
      out[i] = any_free ? -std::sqrt(to_free[i]) * resolution : -inf;
    } else {
      out[i] = any_occ ? std::sqrt(to_occ[i]) * resolution : inf;
    }
  }
  return out;
}

std::vector<double> sdf(std::span<const std::uint8_t> occupied, int width, int height,
                        double resolution, double cap) {
  auto out = signed_distance(occupied, width, height, resolution);
  for (auto& v : out) v = std::clamp(v, -cap, cap);
  return out;
}

std::span<const double> Costmap::plane(int t) const {
  const std::size_t n = spec.cell_count();
  return {values.data() + static_cast<std::size_t>(t) * n, n};
}

Costmap build_costmap(const SemanticMasks& masks, double cap) {
  Costmap cost{masks.spec, masks.horizon, cap, {}};
  const std::size_t n = masks.spec.cell_count();
  cost.values.reserve(static_cast<std::size_t>(masks.horizon) * n);
  std::vector<std::uint8_t> occupied(n);
  for (int t = 0; t < masks.horizon; ++t) {
    const auto labels = masks.plane(t);
    for (std::size_t i = 0; i < n; ++i) occupied[i] = labels[i] == CellClass::occupied;
    const auto plane = sdf(occupied, masks.spec.width, masks.spec.height, masks.spec.resolution, cap);
    cost.values.insert(cost.values.end(), plane.begin(), plane.end());
  }
  return cost;
}

double extract(std::span<const double> plane, std::span<const std::size_t> cells,
               Extraction strategy, double if_empty) {
  if (cells.empty()) return if_empty;
  switch (strategy) {
    case Extraction::min: {
      double m = std::numeric_limits<double>::infinity();
      for (auto c : cells) m = std::min(m, plane[c]);
      return m;
    }
    case Extraction::max: {
      double m = -std::numeric_limits<double>::infinity();
      for (auto c : cells) m = std::max(m, plane[c]);
      return m;
    }
    case Extraction::avg: {
      double sum = 0.0;
      for (auto c : cells) sum += plane[c];
      return sum / static_cast<double>(cells.size());
    }
  }
  return if_empty;
}

TrajectoryStats score_trajectory(const Costmap& cost, const SemanticMasks& masks,
                                 const ConfidenceMaps& maps, std::span<const Pose2> traj,
                                 const Footprint& fp) {
  if (static_cast<int>(traj.size()) != cost.horizon || masks.horizon != cost.horizon ||
      maps.horizon != cost.horizon) {
    throw Error("trajectory length does not match forecast horizon");
  }
  if (!(masks.spec == cost.spec) || !(maps.spec == cost.spec)) {
    throw Error("costmap, masks and confidences must share a grid");
  }
  const GridSpec& spec = cost.spec;
  TrajectoryStats stats;
  stats.score = std::numeric_limits<double>::infinity();
  for (int t = 0; t < cost.horizon; ++t) {
    const auto cells = footprint_cells(spec, compose(spec.center, traj[static_cast<std::size_t>(t)]), fp);
    stats.score = std::min(stats.score, extract(cost.plane(t), cells, Extraction::min, cost.cap));
    if (cells.empty()) continue;
    const auto labels = masks.plane(t);
    const auto p_occ = maps.plane(t, CellClass::occupied);
    const auto p_sh = maps.plane(t, CellClass::shadow);
    double m_o = 0.0, m_s = 0.0, c_o = 0.0, c_s = 0.0;
    for (auto c : cells) {
      m_o += labels[c] == CellClass::occupied ? 1.0 : 0.0;
      m_s += labels[c] == CellClass::shadow ? 1.0 : 0.0;
      c_o += p_occ[c];
      c_s += p_sh[c];
    }
    const double n = static_cast<double>(cells.size());
    stats.f_o = std::max(stats.f_o, m_o / n);
    stats.p_o += c_o / n;
    stats.f_s += m_s / n;
    stats.p_s += c_s / n;
  }
  return stats;
}

}  // namespace cobev
