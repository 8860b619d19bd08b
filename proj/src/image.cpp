#include "cobev/image.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cobev/error.hpp"

namespace cobev {

namespace {

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path + "'");
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type,
               std::span<const std::uint8_t> data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const auto crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

void write_pgm(const std::string& path, int width, int height,
               std::span<const std::uint8_t> bottom_up) {
  if (bottom_up.size() != static_cast<std::size_t>(width) * height) {
    throw Error("pgm size mismatch");
  }
  const std::string header =
      "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  for (int row = height - 1; row >= 0; --row) {
    const auto* line = bottom_up.data() + static_cast<std::size_t>(row) * width;
    bytes.insert(bytes.end(), line, line + width);
  }
  write_file(path, bytes);
}

std::vector<std::uint8_t> encode_png(int width, int height,
                                     std::span<const std::uint8_t> rgb_bottom_up) {
  if (width <= 0 || height <= 0 ||
      rgb_bottom_up.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error("png size mismatch");
  }
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(height) * (1 + 3 * static_cast<std::size_t>(width)));
  for (int row = height - 1; row >= 0; --row) {
    raw.push_back(0);  // filter: none
    const auto* line = rgb_bottom_up.data() + static_cast<std::size_t>(row) * width * 3;
    raw.insert(raw.end(), line, line + static_cast<std::size_t>(width) * 3);
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(packed_size);
  if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK) {
    throw Error("png compression failed");
  }
  packed.resize(packed_size);

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(width));
  put_u32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // 8-bit RGB, deflate, no filter, no interlace
  put_chunk(png, "IHDR", ihdr);
  put_chunk(png, "IDAT", packed);
  put_chunk(png, "IEND", {});
  return png;
}

void write_png(const std::string& path, int width, int height,
               std::span<const std::uint8_t> rgb_bottom_up) {
  write_file(path, encode_png(width, height, rgb_bottom_up));
}

Rgb class_color(CellClass c) {
  switch (c) {
    case CellClass::empty: return {245, 245, 245};
    case CellClass::occupied: return {200, 30, 30};
    case CellClass::shadow: return {90, 90, 110};
    case CellClass::out_of_range: return {20, 20, 20};
  }
  return {0, 0, 0};
}

Rgb sdf_color(double value, double cap) {
  const double t = std::clamp(value / cap, -1.0, 1.0);
  const auto fade = [](double x) { return static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - x))); };
  if (t < 0.0) return {fade(-t), fade(-t), 255};
  return {255, fade(t), fade(t)};
}

void render_raster(const ObservationRaster& raster, const std::string& base) {
  const GridSpec& spec = raster.spec;
  std::vector<std::uint8_t> codes(raster.cells.size()), rgb;
  rgb.reserve(raster.cells.size() * 3);
  for (std::size_t i = 0; i < raster.cells.size(); ++i) {
    codes[i] = static_cast<std::uint8_t>(raster.cells[i]);
    const Rgb c = class_color(raster.cells[i]);
    rgb.insert(rgb.end(), {c.r, c.g, c.b});
  }
  write_png(base + ".png", spec.width, spec.height, rgb);
  write_pgm(base + ".pgm", spec.width, spec.height, codes);
}

void render_sdf(std::span<const double> plane, const GridSpec& spec, double cap,
                const std::string& base) {
  if (plane.size() != spec.cell_count()) throw Error("sdf plane size mismatch");
  std::vector<std::uint8_t> grey(plane.size()), rgb;
  rgb.reserve(plane.size() * 3);
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const double t = std::clamp(plane[i] / cap, -1.0, 1.0);
    grey[i] = static_cast<std::uint8_t>(std::lround(127.5 * (t + 1.0)));
    const Rgb c = sdf_color(plane[i], cap);
    rgb.insert(rgb.end(), {c.r, c.g, c.b});
  }
  write_png(base + ".png", spec.width, spec.height, rgb);
  write_pgm(base + ".pgm", spec.width, spec.height, grey);
}

void render_histogram(const std::vector<std::size_t>& counts, const std::string& png_path) {
  constexpr int kBar = 8, kHeight = 200, kMargin = 4;
  const int width = static_cast<int>(counts.size()) * kBar + 2 * kMargin;
  const int height = kHeight + 2 * kMargin;
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3, 255);
  std::size_t peak = 1;
  for (auto c : counts) peak = std::max(peak, c);
  const double top = std::log10(static_cast<double>(peak) + 1.0);
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] == 0) continue;
    const int bar = std::max(
        1, static_cast<int>(std::lround(kHeight * std::log10(counts[x] + 1.0) / top)));
    for (int row = kMargin; row < kMargin + bar; ++row) {
      for (int col = kMargin + static_cast<int>(x) * kBar + 1;
           col < kMargin + static_cast<int>(x + 1) * kBar - 1; ++col) {
        auto* px = rgb.data() + (static_cast<std::size_t>(row) * width + col) * 3;
        px[0] = 40;
        px[1] = 90;
        px[2] = 170;
      }
    }
  }
  write_png(png_path, width, height, rgb);
}

}  // namespace cobev
