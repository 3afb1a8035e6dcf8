#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tpv/perception.hpp"
#include "tpv/track.hpp"

using namespace tpv;

namespace {

// Large circle: locally straight to ~1e-3 over a few meters.
Track big_circle() { return Track::oval(1000.0, 1.0, 1.5, 0.05); }

// Pose on the big circle at the +x crossing, offset left by `off`, heading
// rotated by dpsi relative to the local (CCW, +y) tangent.
VehicleState pose_on(const Track& tr, double s, double off, double dpsi) {
  const double psi = tr.tangent_at_arclength(s);
  const Vec2 left{-std::sin(psi), std::cos(psi)};
  const Vec2 p = tr.point_at_arclength(s) + left * off;
  return {p.x, p.y, wrap_to_pi(psi + dpsi), 4.0};
}

}  // namespace

TEST_CASE("ground truth angles vanish on a straight centerline") {
  const Track tr = big_circle();
  const auto a = ground_truth_angles(tr, pose_on(tr, 10.0, 0.0, 0.0));
  REQUIRE(a.has_value());
  // residual curvature of the R≈499 m circle contributes about l/(2R)
  CHECK(std::abs(a->theta_near) < 5e-3);
  CHECK(std::abs(a->theta_far) < 5e-3);
}

TEST_CASE("ground truth angles for a 0.5 m right offset") {
  const Track tr = big_circle();
  // right of centerline = negative left offset; target is left => positive
  const auto a = ground_truth_angles(tr, pose_on(tr, 10.0, -0.5, 0.0));
  REQUIRE(a.has_value());
  CHECK(a->theta_near == doctest::Approx(std::atan2(0.5, 1.0)).epsilon(5e-3));
  CHECK(a->theta_far == doctest::Approx(std::atan2(0.5, 3.0)).epsilon(5e-3));
}

TEST_CASE("extraction fails beyond twice the half width") {
  const Track tr = big_circle();
  CHECK_FALSE(ground_truth_angles(tr, pose_on(tr, 10.0, 3.2, 0.0)).has_value());
  CHECK(ground_truth_angles(tr, pose_on(tr, 10.0, 2.8, 0.0)).has_value());
  CHECK_THROWS_AS(ground_truth_angles(tr, pose_on(tr, 0.0, 0.0, 0.0), 3.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("cost map values follow the quadratic distance profile") {
  const Track tr = big_circle();
  // ego 0.15 m right of the centerline so pixel centers land on exact offsets
  const CostMapGrid g = render_cost_map(tr, pose_on(tr, 10.0, -0.15, 0.0));
  // ego pixel: bottom-center, 0.15 m from the centerline
  CHECK(g.at(80, 127) == doctest::Approx(std::pow(0.15 / 1.5, 2)).epsilon(2e-2));
  // pixel 0.6 m right of ego: 0.75 m from the centerline => (0.75/1.5)^2
  CHECK(g.at(89, 127) == doctest::Approx(0.25).epsilon(2e-2));
  // far off-lane pixel clamps to 1
  CHECK(g.at(0, 127) == 1.0f);
  for (float v : g.values) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
}

TEST_CASE("cost map ego pixel is zero on the centerline") {
  const Track tr = big_circle();
  const CostMapGrid g = render_cost_map(tr, pose_on(tr, 10.0, 0.0, 0.0));
  CHECK(g.at(80, 127) < 5e-4);  // within half a point spacing of the centerline
}

TEST_CASE("parallel rasterizer matches the serial reference bit for bit") {
  const Track tr = Track::oval(30.0, 0.75, 1.5, 0.05);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> s_uni(0.0, tr.perimeter());
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> dpsi(-0.3, 0.3);
  for (int i = 0; i < 5; ++i) {
    const VehicleState pose = pose_on(tr, s_uni(rng), off(rng), dpsi(rng));
    const CostMapGrid a = render_cost_map(tr, pose);
    const CostMapGrid b = render_cost_map_serial(tr, pose);
    CHECK(a.values == b.values);
  }
}

TEST_CASE("costmap_angles picks the per-row minimum") {
  CostMapGrid g;
  g.values.assign(static_cast<std::size_t>(g.width) * g.height, 1.0f);
  auto set = [&](int col, int rows_from_bottom, float v) {
    g.values[(g.height - 1 - rows_from_bottom) * g.width + col] = v;
  };
  SUBCASE("centered columns give zero angles") {
    set(80, 15, 0.0f);
    set(80, 45, 0.0f);
    const auto a = costmap_angles(g);
    REQUIRE(a.has_value());
    CHECK(a->theta_near == 0.0);
    CHECK(a->theta_far == 0.0);
  }
  SUBCASE("15 columns left at row 15 gives pi/4") {
    set(65, 15, 0.1f);
    set(80, 45, 0.0f);
    const auto a = costmap_angles(g);
    REQUIRE(a.has_value());
    CHECK(a->theta_near == doctest::Approx(M_PI / 4.0));
  }
  SUBCASE("45 columns left at row 45 gives pi/4") {
    set(80, 15, 0.0f);
    set(35, 45, 0.2f);
    const auto a = costmap_angles(g);
    REQUIRE(a.has_value());
    CHECK(a->theta_far == doctest::Approx(M_PI / 4.0));
  }
  SUBCASE("uniform max-cost row signals extraction failure") {
    set(80, 15, 0.0f);  // near row visible, far row saturated
    CHECK_FALSE(costmap_angles(g).has_value());
  }
  SUBCASE("ties break toward the image center") {
    set(60, 15, 0.3f);
    set(90, 15, 0.3f);
    set(80, 45, 0.0f);
    const auto a = costmap_angles(g);
    REQUIRE(a.has_value());
    // col 90 is nearer to center 80 than col 60
    CHECK(a->theta_near == doctest::Approx(std::atan2(-10.0, 15.0)));
  }
}

TEST_CASE("costmap angles agree with ground truth for mild poses") {
  const Track tr = Track::oval(30.0, 0.75, 1.5, 0.05);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s_uni(0.0, tr.perimeter());
  std::uniform_real_distribution<double> off(-0.5, 0.5);
  std::uniform_real_distribution<double> dpsi(-0.1, 0.1);
  const double tol = 4.0 * M_PI / 180.0;
  for (int i = 0; i < 100; ++i) {
    const VehicleState pose = pose_on(tr, s_uni(rng), off(rng), dpsi(rng));
    const auto gt = ground_truth_angles(tr, pose);
    const auto cm = costmap_angles(render_cost_map(tr, pose));
    REQUIRE(gt.has_value());
    REQUIRE(cm.has_value());
    CHECK(std::abs(gt->theta_near - cm->theta_near) < tol);
    CHECK(std::abs(gt->theta_far - cm->theta_far) < tol);
  }
}

TEST_CASE("cost-map symmetry: mirrored offset negates the angles") {
  const Track tr = big_circle();
  const double quant = std::atan2(1.5 / 15.0, 1.0);  // 1.5 px at the near row
  for (double off : {0.2, 0.5, 0.8}) {
    const auto a = costmap_angles(render_cost_map(tr, pose_on(tr, 10.0, off, 0.0)));
    const auto b = costmap_angles(render_cost_map(tr, pose_on(tr, 10.0, -off, 0.0)));
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(std::abs(a->theta_near + b->theta_near) < quant);
    CHECK(std::abs(a->theta_far + b->theta_far) < quant);
  }
}

TEST_CASE("PGM export carries the grid dimensions") {
  const Track tr = big_circle();
  const CostMapGrid g = render_cost_map(tr, pose_on(tr, 10.0, 0.0, 0.0));
  std::ostringstream os(std::ios::binary);
  write_pgm(g, os);
  const std::string s = os.str();
  CHECK(s.rfind("P5\n160 128\n255\n", 0) == 0);
  CHECK(s.size() == 15 + 160 * 128);
}

TEST_CASE("projection of on-axis points hits the principal point") {
  const CameraModel cam = CameraModel::from_fov(416, 416, M_PI / 3.0);
  const VehicleState pose{0.0, 0.0, 0.0, 0.0};
  for (double z : {0.5, 2.0, 50.0}) {
    const auto px = project_world_point(cam, pose, {z, 0.0, cam.mount_height});
    REQUIRE(px.has_value());
    CHECK(px->x == doctest::Approx(cam.cx));
    CHECK(px->y == doctest::Approx(cam.cy));
  }
}

TEST_CASE("points left of the axis project left of center") {
  CameraModel cam;
  cam.fx = cam.fy = 300.0;
  cam.cx = cam.cy = 208.0;
  cam.width = cam.height = 416;
  cam.fov = 2.0 * std::atan2(208.0, 300.0);
  cam.mount_height = 0.2;
  const VehicleState pose{0.0, 0.0, 0.0, 0.0};
  // 1 m ahead, 0.1 m left in the body frame
  const auto px = project_world_point(cam, pose, {1.0, 0.1, cam.mount_height});
  REQUIRE(px.has_value());
  CHECK(px->x == doctest::Approx(cam.cx - 30.0));
}

TEST_CASE("points behind the camera are flagged") {
  const CameraModel cam = CameraModel::from_fov(416, 416, M_PI / 3.0);
  const VehicleState pose{0.0, 0.0, 0.0, 0.0};
  CHECK_FALSE(project_world_point(cam, pose, {-1.0, 0.0, 0.2}).has_value());
  CHECK_FALSE(project_world_point(cam, pose, {0.0, 0.0, 0.2}).has_value());
}

TEST_CASE("pixel -> world -> pixel round trip") {
  const CameraModel cam = CameraModel::from_fov(416, 416, M_PI / 3.0);
  const VehicleState pose{3.0, -2.0, 0.8, 0.0};
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> upix(0.0, 416.0);
  std::uniform_real_distribution<double> depth(0.5, 30.0);
  const double c = std::cos(pose.psi), s = std::sin(pose.psi);
  for (int i = 0; i < 1000; ++i) {
    const double u = upix(rng), v = upix(rng), z = depth(rng);
    // camera frame point for that pixel/depth
    const double X = (u - cam.cx) * z / cam.fx, Y = (v - cam.cy) * z / cam.fy;
    // camera -> body -> world
    const double bx = z, by = -X, bz = -Y + cam.mount_height;
    const Vec3 q{pose.x + c * bx - s * by, pose.y + s * bx + c * by, bz};
    const auto px = project_world_point(cam, pose, q);
    REQUIRE(px.has_value());
    CHECK(std::abs(px->x - u) < 1e-6);
    CHECK(std::abs(px->y - v) < 1e-6);
  }
}

TEST_CASE("lead directly ahead gives a horizontally centered box") {
  const CameraModel cam = CameraModel::from_fov(416, 416, M_PI / 3.0);
  const VehicleState trail{0.0, 0.0, 0.0, 0.0};
  const VehicleState lead{6.0, 0.0, 0.0, 0.0};
  const auto box = bounding_box_from_pose(cam, trail, lead, VehicleDims{});
  REQUIRE(box.has_value());
  CHECK(box->center_x() == doctest::Approx(cam.cx).epsilon(1e-9));
}

TEST_CASE("lead behind the trailing vehicle is not visible") {
  const CameraModel cam = CameraModel::from_fov(416, 416, M_PI / 3.0);
  const VehicleState trail{0.0, 0.0, 0.0, 0.0};
  const VehicleState lead{-6.0, 0.0, 0.0, 0.0};
  CHECK_FALSE(bounding_box_from_pose(cam, trail, lead, VehicleDims{}).has_value());
}

TEST_CASE("broadside box width matches the similar-triangles prediction") {
  const CameraModel cam = CameraModel::from_fov(416, 416, M_PI / 3.0);
  const VehicleState trail{0.0, 0.0, 0.0, 0.0};
  const VehicleDims dims{1.0, 0.6, 0.4};
  for (double z : {4.0, 5.0, 8.0}) {
    const VehicleState lead{z, 0.0, M_PI / 2.0, 0.0};  // broadside to the camera
    const auto box = bounding_box_from_pose(cam, trail, lead, dims);
    REQUIRE(box.has_value());
    const double predicted = dims.length * cam.fx / (z - dims.width / 2.0);
    CHECK(std::abs(box->width() - predicted) <= 1.0);
  }
}

TEST_CASE("bearing from bbox: center, edges, and monotonicity") {
  const CameraModel cam = CameraModel::from_fov(416, 416, M_PI / 3.0);
  BoundingBox b{200.0, 100.0, 216.0, 140.0};  // centered at 208 = W/2
  CHECK(bearing_from_bbox(b, cam) == doctest::Approx(0.0));
  b = {0.0, 100.0, 0.0, 140.0};
  CHECK(bearing_from_bbox(b, cam) == doctest::Approx(cam.fov / 2.0));
  b = {416.0, 100.0, 416.0, 140.0};
  CHECK(bearing_from_bbox(b, cam) == doctest::Approx(-cam.fov / 2.0));

  const VehicleState trail{0.0, 0.0, 0.0, 0.0};
  double prev = std::numeric_limits<double>::lowest();
  for (double y = -2.0; y <= 2.0; y += 0.25) {
    const auto box =
        bounding_box_from_pose(cam, trail, {6.0, y, 0.0, 0.0}, VehicleDims{});
    REQUIRE(box.has_value());
    const double th = bearing_from_bbox(*box, cam);
    CHECK(th > prev);
    prev = th;
  }
}

TEST_CASE("bounding boxes export as CSV") {
  std::ostringstream os;
  write_bbox_csv({{1.0, 2.0, 3.0, 4.0}}, os);
  CHECK(os.str() == "1,2,3,4\n");
}
