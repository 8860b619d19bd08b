#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace cobev {

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Pose of `b` (expressed in frame `a`) lifted into the frame `a` lives in.
Pose2 compose(const Pose2& a, const Pose2& b);
Pose2 inverse(const Pose2& p);
/// Expresses `p` in the frame of `frame`: compose(inverse(frame), p).
Pose2 relative(const Pose2& frame, const Pose2& p);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

Point2 transform_point(const Pose2& frame, Point2 local);

struct Footprint {
  double length = 4.5;  // along heading
  double width = 2.0;   // across heading

  void validate() const;
};

/// Point-in-rectangle test used for raster membership. The rectangle is taken
/// half-open in its own frame, [-L/2, L/2) x [-W/2, W/2), so tiling footprints
/// never claim the same cell center twice.
bool rect_contains(const Pose2& pose, const Footprint& fp, Point2 p);

/// Corners in counter-clockwise order starting at the rear-right corner.
std::vector<Point2> rect_corners(const Pose2& pose, const Footprint& fp);

/// Separating-axis test. Boundary contact counts as overlap.
bool rectangles_overlap(const Pose2& pose_a, const Footprint& fp_a,
                        const Pose2& pose_b, const Footprint& fp_b);

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

/// Regular raster anchored at `center`. Row index grows along the anchor's
/// local +y axis, column index along its +x axis.
struct GridSpec {
  Pose2 center;
  double resolution = 0.2;
  int width = 256;
  int height = 256;

  void validate() const;
  std::size_t cell_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width + col;
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index / width), static_cast<int>(index % width)};
  }
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width;
  }
  /// Cell center in the anchor frame.
  Point2 local_center(int row, int col) const {
    return {(col + 0.5 - 0.5 * width) * resolution, (row + 0.5 - 0.5 * height) * resolution};
  }
  /// Cell center in the world frame.
  Point2 world_center(int row, int col) const;
  std::optional<Cell> cell_of_local(Point2 p) const;
  std::optional<Cell> cell_of_world(Point2 p) const;

  bool operator==(const GridSpec& o) const;
};

/// GridSpec::world_center with the anchor rotation evaluated once, for loops
/// over many cells.
class CellCenters {
 public:
  explicit CellCenters(const GridSpec& spec);
  Point2 operator()(int row, int col) const {
    const Point2 l = spec_.local_center(row, col);
    return {spec_.center.x + c_ * l.x - s_ * l.y, spec_.center.y + s_ * l.x + c_ * l.y};
  }

 private:
  GridSpec spec_;
  double c_, s_;
};

/// In-bounds cells whose centers fall inside the footprint placed at `pose`
/// (world frame). Linear indices, ascending (row-major).
std::vector<std::size_t> footprint_cells(const GridSpec& spec, const Pose2& pose,
                                         const Footprint& fp);

}  // namespace cobev
