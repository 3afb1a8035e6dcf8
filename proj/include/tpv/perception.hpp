#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tpv/common.hpp"
#include "tpv/track.hpp"
#include "tpv/vehicle.hpp"

namespace tpv {

/// Near/far feature angles, CCW-positive (target left of heading => positive).
struct FeatureAngles {
  double theta_near = 0.0;
  double theta_far = 0.0;
};

/// Ground-truth extraction: probe points l_near / l_far meters ahead along
/// the heading axis, take the nearest centerline neighbor of each probe, and
/// return the body-frame bearing from the vehicle to that neighbor.
/// Returns nullopt when the pose is more than 2*half_width off the
/// centerline (extraction failure).
std::optional<FeatureAngles> ground_truth_angles(const Track& track,
                                                 const VehicleState& pose,
                                                 double l_near = 1.0,
                                                 double l_far = 3.0);

/// Top-down grayscale lane cost grid. Row 0 is the top of the image; the ego
/// vehicle sits at the bottom-center pixel with its heading pointing up.
struct CostMapGrid {
  int width = 160;
  int height = 128;
  double px_per_m = 15.0;
  std::vector<float> values;  // row-major, [0, 1]

  float at(int col, int row) const { return values[row * width + col]; }
};

/// Rasterize the lane cost map around the given pose:
/// cost = min((d / half_width)^2, 1) with d the distance to the centerline.
/// Rows are processed in parallel when OpenMP is enabled; output is identical
/// to render_cost_map_serial.
CostMapGrid render_cost_map(const Track& track, const VehicleState& pose);

/// Single-threaded reference rasterizer using the brute-force linear
/// nearest-neighbor scan. Kept for tests and benchmarks.
CostMapGrid render_cost_map_serial(const Track& track, const VehicleState& pose);

/// Extract the feature angles from a cost map by taking the minimum-cost
/// column of the rows near_rows / far_rows up from the bottom of the image:
/// theta = atan((W/2 - col) / row). Ties go to the column nearest the image
/// center, then the lowest index. Returns nullopt when a row is uniformly at
/// maximum cost (no lane visible).
std::optional<FeatureAngles> costmap_angles(const CostMapGrid& grid,
                                            int near_rows = 15,
                                            int far_rows = 45);

/// 8-bit binary PGM, row 0 at the top.
void write_pgm(const CostMapGrid& grid, std::ostream& os);
void write_pgm(const CostMapGrid& grid, const std::string& path);

/// Pinhole camera rigidly mounted on the vehicle, looking along +x of the
/// body frame. Camera axes: X right, Y down, Z forward.
struct CameraModel {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 416, height = 416;
  double fov = 0.0;           ///< horizontal, rad; fov = 2 atan(W/(2 fx))
  double mount_height = 0.2;  ///< camera height above the body origin, m

  /// Derive the intrinsics from an image size and horizontal field of view.
  static CameraModel from_fov(int width, int height, double fov_rad,
                              double mount_height = 0.2);
};

struct Pixel {
  double x = 0.0;
  double y = 0.0;
};

/// Project a world point through the camera of the given (trailing) vehicle.
/// Returns nullopt when the point is at or behind the camera plane.
std::optional<Pixel> project_world_point(const CameraModel& cam,
                                         const VehicleState& trailing_pose,
                                         const Vec3& q_world);

struct BoundingBox {
  double x_min = 0.0, y_min = 0.0;
  double x_max = 0.0, y_max = 0.0;
  double center_x() const { return 0.5 * (x_min + x_max); }
  double width() const { return x_max - x_min; }
};

struct VehicleDims {
  double length = 1.0;
  double width = 0.6;
  double height = 0.4;
};

/// Project the eight corners of the lead vehicle's oriented box and take the
/// axis-aligned hull, clamped to the image. Returns nullopt when every corner
/// is behind the camera or the hull misses the image entirely.
std::optional<BoundingBox> bounding_box_from_pose(const CameraModel& cam,
                                                  const VehicleState& trailing_pose,
                                                  const VehicleState& lead_pose,
                                                  const VehicleDims& dims);

/// Linear column-to-bearing map: theta = ((W/2 - x_center)/(W/2)) * fov/2.
double bearing_from_bbox(const BoundingBox& box, const CameraModel& cam);

/// One "x_min,y_min,x_max,y_max" line per box.
void write_bbox_csv(const std::vector<BoundingBox>& boxes, std::ostream& os);

}  // namespace tpv
