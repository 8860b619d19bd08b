#include "cobev/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cobev/error.hpp"

namespace cobev {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kOverlapSlack = 1e-9;
}  // namespace

double normalize_angle(double angle) {
  double a = std::remainder(angle, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

Pose2 compose(const Pose2& a, const Pose2& b) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y,
          normalize_angle(a.theta + b.theta)};
}

Pose2 inverse(const Pose2& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {-c * p.x - s * p.y, s * p.x - c * p.y, normalize_angle(-p.theta)};
}

Pose2 relative(const Pose2& frame, const Pose2& p) {
  const double c = std::cos(frame.theta);
  const double s = std::sin(frame.theta);
  const double dx = p.x - frame.x;
  const double dy = p.y - frame.y;
  return {c * dx + s * dy, -s * dx + c * dy, normalize_angle(p.theta - frame.theta)};
}

Point2 transform_point(const Pose2& frame, Point2 local) {
  const double c = std::cos(frame.theta);
  const double s = std::sin(frame.theta);
  return {frame.x + c * local.x - s * local.y, frame.y + s * local.x + c * local.y};
}

void Footprint::validate() const {
  if (!(length > 0.0) || !(width > 0.0)) throw Error("footprint dimensions must be positive");
}

bool rect_contains(const Pose2& pose, const Footprint& fp, Point2 p) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double dx = p.x - pose.x;
  const double dy = p.y - pose.y;
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  const double hl = 0.5 * fp.length;
  const double hw = 0.5 * fp.width;
  return u >= -hl && u < hl && v >= -hw && v < hw;
}

std::vector<Point2> rect_corners(const Pose2& pose, const Footprint& fp) {
  const double hl = 0.5 * fp.length;
  const double hw = 0.5 * fp.width;
  return {transform_point(pose, {-hl, -hw}), transform_point(pose, {hl, -hw}),
          transform_point(pose, {hl, hw}), transform_point(pose, {-hl, hw})};
}

bool rectangles_overlap(const Pose2& pose_a, const Footprint& fp_a, const Pose2& pose_b,
                        const Footprint& fp_b) {
  const auto ca = rect_corners(pose_a, fp_a);
  const auto cb = rect_corners(pose_b, fp_b);
  const double axes[4][2] = {{std::cos(pose_a.theta), std::sin(pose_a.theta)},
                             {-std::sin(pose_a.theta), std::cos(pose_a.theta)},
                             {std::cos(pose_b.theta), std::sin(pose_b.theta)},
                             {-std::sin(pose_b.theta), std::cos(pose_b.theta)}};
  for (const auto& axis : axes) {
    double min_a = std::numeric_limits<double>::infinity(), max_a = -min_a;
    double min_b = min_a, max_b = -min_a;
    for (const auto& p : ca) {
      const double d = p.x * axis[0] + p.y * axis[1];
      min_a = std::min(min_a, d);
      max_a = std::max(max_a, d);
    }
    for (const auto& p : cb) {
      const double d = p.x * axis[0] + p.y * axis[1];
      min_b = std::min(min_b, d);
      max_b = std::max(max_b, d);
    }
    if (max_a < min_b - kOverlapSlack || max_b < min_a - kOverlapSlack) return false;
  }
  return true;
}

void GridSpec::validate() const {
  if (!(resolution > 0.0)) throw Error("grid resolution must be positive");
  if (width <= 0 || height <= 0) throw Error("grid dimensions must be positive");
}

Point2 GridSpec::world_center(int row, int col) const {
  return transform_point(center, local_center(row, col));
}

CellCenters::CellCenters(const GridSpec& spec)
    : spec_(spec), c_(std::cos(spec.center.theta)), s_(std::sin(spec.center.theta)) {}

std::optional<Cell> GridSpec::cell_of_local(Point2 p) const {
  const double fc = std::floor(p.x / resolution + 0.5 * width);
  const double fr = std::floor(p.y / resolution + 0.5 * height);
  if (fc < 0 || fr < 0 || fc >= width || fr >= height) return std::nullopt;
  return Cell{static_cast<int>(fr), static_cast<int>(fc)};
}

std::optional<Cell> GridSpec::cell_of_world(Point2 p) const {
  const Pose2 local = relative(center, {p.x, p.y, 0.0});
  return cell_of_local({local.x, local.y});
}

bool GridSpec::operator==(const GridSpec& o) const {
  return center.x == o.center.x && center.y == o.center.y && center.theta == o.center.theta &&
         resolution == o.resolution && width == o.width && height == o.height;
}

std::vector<std::size_t> footprint_cells(const GridSpec& spec, const Pose2& pose,
                                         const Footprint& fp) {
  // Footprint pose in the anchor frame; the bounding box there bounds the scan.
  const Pose2 local = relative(spec.center, pose);
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& c : rect_corners(local, fp)) {
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }
  const auto col_lo = std::max(0.0, std::floor(min_x / spec.resolution + 0.5 * spec.width) - 1);
  const auto col_hi =
      std::min(spec.width - 1.0, std::floor(max_x / spec.resolution + 0.5 * spec.width) + 1);
  const auto row_lo = std::max(0.0, std::floor(min_y / spec.resolution + 0.5 * spec.height) - 1);
  const auto row_hi =
      std::min(spec.height - 1.0, std::floor(max_y / spec.resolution + 0.5 * spec.height) + 1);

  // Same test as rect_contains with the rotation hoisted out of the loop.
  const double c = std::cos(local.theta);
  const double s = std::sin(local.theta);
  const double hl = 0.5 * fp.length;
  const double hw = 0.5 * fp.width;
  std::vector<std::size_t> cells;
  for (int row = static_cast<int>(row_lo); row <= static_cast<int>(row_hi); ++row) {
    for (int col = static_cast<int>(col_lo); col <= static_cast<int>(col_hi); ++col) {
      const Point2 p = spec.local_center(row, col);
      const double dx = p.x - local.x;
      const double dy = p.y - local.y;
      const double u = c * dx + s * dy;
      const double v = -s * dx + c * dy;
      if (u >= -hl && u < hl && v >= -hw && v < hw) cells.push_back(spec.index(row, col));
    }
  }
  return cells;
}

}  // namespace cobev
