#include "tpv/perception.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace tpv {

std::optional<FeatureAngles> ground_truth_angles(const Track& track,
                                                 const VehicleState& pose,
                                                 double l_near, double l_far) {
  if (!(l_far > l_near) || !(l_near > 0.0))
    throw std::invalid_argument("perception: need l_far > l_near > 0");

  const Vec2 p = pose.position();
  if (std::abs(track.nearest(p).signed_error) > 2.0 * track.half_width())
    return std::nullopt;

  const Vec2 h = pose.heading();
  FeatureAngles out;
  for (const auto& [dist, theta] :
       {std::pair<double, double*>{l_near, &out.theta_near},
        std::pair<double, double*>{l_far, &out.theta_far}}) {
    const Vec2 probe = p + h * dist;
    const LateralSample nn = track.nearest(probe);
    *theta = wrap_to_pi(std::atan2(nn.nn_point.y - p.y, nn.nn_point.x - p.x) - pose.psi);
  }
  return out;
}

namespace {

template <typename NearestFn>
void render_row(const Track& track, const VehicleState& pose, CostMapGrid& grid,
                int row, NearestFn&& nearest) {
  const Vec2 p = pose.position();
  const Vec2 h = pose.heading();
  const Vec2 left{-h.y, h.x};
  const double hw = track.half_width();
  const double fwd = (grid.height - 1 - row) / grid.px_per_m;
  for (int col = 0; col < grid.width; ++col) {
    const double lat = (grid.width / 2 - col) / grid.px_per_m;
    const Vec2 world = p + h * fwd + left * lat;
    const double d = std::abs(nearest(world).signed_error);
    const double cost = std::min(d / hw * (d / hw), 1.0);
    grid.values[row * grid.width + col] = static_cast<float>(cost);
  }
}

}  // namespace

CostMapGrid render_cost_map(const Track& track, const VehicleState& pose) {
  CostMapGrid grid;
  grid.values.resize(static_cast<std::size_t>(grid.width) * grid.height);
#pragma omp parallel for schedule(static)
  for (int row = 0; row < grid.height; ++row)
    render_row(track, pose, grid, row, [&](const Vec2& q) { return track.nearest(q); });
  return grid;
}

CostMapGrid render_cost_map_serial(const Track& track, const VehicleState& pose) {
  CostMapGrid grid;
  grid.values.resize(static_cast<std::size_t>(grid.width) * grid.height);
  for (int row = 0; row < grid.height; ++row)
    render_row(track, pose, grid, row,
               [&](const Vec2& q) { return track.nearest_linear(q); });
  return grid;
}

namespace {

// Minimum-cost column of the row `rows_from_bottom` up from the image bottom.
// Ties prefer the column nearest the image center, then the lowest index.
std::optional<int> row_argmin(const CostMapGrid& grid, int rows_from_bottom) {
  const int row = grid.height - 1 - rows_from_bottom;
  if (row < 0 || row >= grid.height)
    throw std::invalid_argument("perception: row outside cost map");
  float best = std::numeric_limits<float>::infinity();
  int best_col = -1;
  const int center = grid.width / 2;
  for (int col = 0; col < grid.width; ++col) {
    const float v = grid.at(col, row);
    if (v < best ||
        (v == best && std::abs(col - center) < std::abs(best_col - center))) {
      best = v;
      best_col = col;
    }
  }
  if (best >= 1.0f) return std::nullopt;  // row uniformly at max cost
  return best_col;
}

}  // namespace

std::optional<FeatureAngles> costmap_angles(const CostMapGrid& grid,
                                            int near_rows, int far_rows) {
  const auto col_near = row_argmin(grid, near_rows);
  const auto col_far = row_argmin(grid, far_rows);
  if (!col_near || !col_far) return std::nullopt;
  FeatureAngles out;
  out.theta_near = std::atan2(static_cast<double>(grid.width / 2 - *col_near),
                              static_cast<double>(near_rows));
  out.theta_far = std::atan2(static_cast<double>(grid.width / 2 - *col_far),
                             static_cast<double>(far_rows));
  return out;
}

void write_pgm(const CostMapGrid& grid, std::ostream& os) {
  os << "P5\n" << grid.width << ' ' << grid.height << "\n255\n";
  for (float v : grid.values) {
    const auto byte = static_cast<unsigned char>(
        std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
    os.put(static_cast<char>(byte));
  }
}

void write_pgm(const CostMapGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("perception: cannot write " + path);
  write_pgm(grid, out);
}

CameraModel CameraModel::from_fov(int width, int height, double fov_rad,
                                  double mount_height) {
  if (!(fov_rad > 0.0) || fov_rad >= M_PI)
    throw std::invalid_argument("camera: fov must be in (0, pi)");
  CameraModel cam;
  cam.width = width;
  cam.height = height;
  cam.fov = fov_rad;
  cam.fx = width / (2.0 * std::tan(fov_rad / 2.0));
  cam.fy = cam.fx;
  cam.cx = width / 2.0;
  cam.cy = height / 2.0;
  cam.mount_height = mount_height;
  return cam;
}

std::optional<Pixel> project_world_point(const CameraModel& cam,
                                         const VehicleState& trailing_pose,
                                         const Vec3& q_world) {
  // world -> body
  const double dx = q_world.x - trailing_pose.x;
  const double dy = q_world.y - trailing_pose.y;
  const double c = std::cos(trailing_pose.psi), s = std::sin(trailing_pose.psi);
  const double bx = c * dx + s * dy;        // forward
  const double by = -s * dx + c * dy;       // left
  const double bz = q_world.z - cam.mount_height;  // up, relative to camera
  // body -> camera (X right, Y down, Z forward)
  const double X = -by, Y = -bz, Z = bx;
  if (Z <= 0.0) return std::nullopt;
  return Pixel{cam.fx * X / Z + cam.cx, cam.fy * Y / Z + cam.cy};
}

std::optional<BoundingBox> bounding_box_from_pose(const CameraModel& cam,
                                                  const VehicleState& trailing_pose,
                                                  const VehicleState& lead_pose,
                                                  const VehicleDims& dims) {
  if (!(dims.length > 0.0) || !(dims.width > 0.0) || !(dims.height > 0.0))
    throw std::invalid_argument("perception: lead dims must be positive");

  const double c = std::cos(lead_pose.psi), s = std::sin(lead_pose.psi);
  bool any_visible = false;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (int corner = 0; corner < 8; ++corner) {
    const double lx = (corner & 1 ? 0.5 : -0.5) * dims.length;
    const double ly = (corner & 2 ? 0.5 : -0.5) * dims.width;
    const double lz = (corner & 4) ? dims.height : 0.0;
    const Vec3 q{lead_pose.x + c * lx - s * ly, lead_pose.y + s * lx + c * ly, lz};
    if (const auto px = project_world_point(cam, trailing_pose, q)) {
      any_visible = true;
      x_min = std::min(x_min, px->x);
      x_max = std::max(x_max, px->x);
      y_min = std::min(y_min, px->y);
      y_max = std::max(y_max, px->y);
    }
  }
  if (!any_visible) return std::nullopt;
  if (x_max < 0.0 || x_min > cam.width || y_max < 0.0 || y_min > cam.height)
    return std::nullopt;  // fully outside the image
  BoundingBox box;
  box.x_min = std::clamp(x_min, 0.0, static_cast<double>(cam.width));
  box.x_max = std::clamp(x_max, 0.0, static_cast<double>(cam.width));
  box.y_min = std::clamp(y_min, 0.0, static_cast<double>(cam.height));
  box.y_max = std::clamp(y_max, 0.0, static_cast<double>(cam.height));
  return box;
}

double bearing_from_bbox(const BoundingBox& box, const CameraModel& cam) {
  const double half_w = cam.width / 2.0;
  return (half_w - box.center_x()) / half_w * (cam.fov / 2.0);
}

void write_bbox_csv(const std::vector<BoundingBox>& boxes, std::ostream& os) {
  os.precision(17);
  for (const auto& b : boxes)
    os << b.x_min << ',' << b.y_min << ',' << b.x_max << ',' << b.y_max << '\n';
}

}  // namespace tpv
