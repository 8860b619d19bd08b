#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cobev/costmap.hpp"
#include "cobev/sim.hpp"

namespace cobev {

/// Binary greyscale PGM (P5), rows written top (max row index) to bottom.
void write_pgm(const std::string& path, int width, int height,
               std::span<const std::uint8_t> row_major_bottom_up);

/// 8-bit RGB PNG, same row convention as write_pgm.
void write_png(const std::string& path, int width, int height,
               std::span<const std::uint8_t> rgb_bottom_up);

/// Encoded PNG bytes (no I/O).
std::vector<std::uint8_t> encode_png(int width, int height,
                                     std::span<const std::uint8_t> rgb_bottom_up);

struct Rgb {
  std::uint8_t r, g, b;
  bool operator==(const Rgb&) const = default;
};

Rgb class_color(CellClass c);
/// Diverging blue (negative) / white (zero) / red (positive) palette over [-cap, cap].
Rgb sdf_color(double value, double cap);

/// Writes `<base>.png` (fixed class palette) and `<base>.pgm` (class codes 0..3).
void render_raster(const ObservationRaster& raster, const std::string& base);

/// Writes `<base>.png` (diverging palette) and `<base>.pgm` ([-cap, cap] -> [0, 255]).
void render_sdf(std::span<const double> plane, const GridSpec& spec, double cap,
                const std::string& base);

/// Log-scale bar chart of a colliding-count histogram.
void render_histogram(const std::vector<std::size_t>& counts, const std::string& png_path);

}  // namespace cobev
