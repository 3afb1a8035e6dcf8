#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "tpv/common.hpp"

namespace tpv {

/// Nearest-centerline query result. signed_error is positive when the query
/// point lies left of the local travel direction (counter-clockwise track).
struct LateralSample {
  Vec2 nn_point;
  std::size_t nn_index = 0;
  double signed_error = 0.0;
};

/// Closed-loop test track: a densely sampled centerline polyline plus a
/// uniform lane half-width. The centerline is ordered counter-clockwise.
class Track {
 public:
  /// Build an elliptical track. The centerline semi-major axis is
  /// outer_diameter/2 - half_width so the outer lane edge touches the stated
  /// outer diameter; the semi-minor axis is scaled by aspect_ratio.
  /// Points are spaced at most `spacing` apart in arc length.
  static Track oval(double outer_diameter, double aspect_ratio,
                    double half_width, double spacing);

  /// Build from an explicit closed centerline (used for CSV import and
  /// synthetic fixtures). Points must already be ordered counter-clockwise.
  static Track from_points(std::vector<Vec2> centerline, double half_width);

  static Track from_csv(const std::string& path, double half_width);

  const std::vector<Vec2>& centerline() const { return pts_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  double perimeter() const { return perimeter_; }

  /// Exact nearest centerline point by Euclidean distance, ties broken by
  /// lowest index. Uses a coarse/fine two-level scan that returns the same
  /// result as a full linear scan.
  LateralSample nearest(const Vec2& p) const;

  /// Brute-force linear scan. Reference path for tests and benchmarks.
  LateralSample nearest_linear(const Vec2& p) const;

  bool inside_lane(const Vec2& p) const;

  /// Centerline point at arc length s (wraps around the loop).
  Vec2 point_at_arclength(double s) const;
  /// Heading of the centerline tangent at arc length s.
  double tangent_at_arclength(double s) const;
  /// Heading of the centerline tangent at point index i.
  double tangent_at(std::size_t i) const;

  void export_csv(std::ostream& os) const;
  void export_csv(const std::string& path) const;

 private:
  Track() = default;
  void finalize();
  double signed_error_at(const Vec2& p, std::size_t i) const;

  std::vector<Vec2> pts_;
  std::vector<double> arclen_;  // cumulative arc length at each point
  double half_width_ = 0.0;
  double spacing_ = 0.0;
  double perimeter_ = 0.0;

  // coarse representatives, every coarse_stride_-th point
  std::size_t coarse_stride_ = 1;
  std::vector<Vec2> coarse_;
};

}  // namespace tpv
