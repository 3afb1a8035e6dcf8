#include "tpv/sim.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tpv/controller.hpp"
#include "tpv/perception.hpp"

namespace tpv {

namespace {
constexpr double kHarmonicWeights[3] = {0.5, 0.3, 0.2};
}

LeadScript::LeadScript(const LeadConfig& cfg, double start_arclength,
                       double perimeter, std::uint64_t seed)
    : speed_(cfg.speed),
      start_s_(start_arclength),
      amplitude_(cfg.amplitude),
      lap_time_(perimeter / cfg.speed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  for (double& p : phase_) p = uni(rng);
}

double LeadScript::lateral_offset(double t) const {
  double off = 0.0;
  for (int i = 0; i < 3; ++i)
    off += kHarmonicWeights[i] *
           std::sin(2.0 * M_PI * (i + 1) * t / lap_time_ + phase_[i]);
  return amplitude_ * off;
}

VehicleState LeadScript::pose(const Track& track, double t) const {
  const double s = start_s_ + speed_ * t;
  const Vec2 c = track.point_at_arclength(s);
  const double psi = track.tangent_at_arclength(s);
  const Vec2 left{-std::sin(psi), std::cos(psi)};
  const Vec2 p = c + left * lateral_offset(t);
  return {p.x, p.y, psi, speed_};
}

Metrics compute_metrics(const TrajectoryLog& log) {
  if (log.rows.empty()) throw std::invalid_argument("metrics: empty log");
  double sum = 0.0;
  for (const auto& r : log.rows) sum += std::abs(r.lat_err);
  const double mean = sum / log.rows.size();
  double var = 0.0;
  for (const auto& r : log.rows) {
    const double d = std::abs(r.lat_err) - mean;
    var += d * d;
  }
  Metrics m;
  m.mean_abs_lat_err = mean;
  m.std_lat_err = std::sqrt(var / log.rows.size());
  m.laps_completed = static_cast<int>(log.lap_bounds.size());
  return m;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  const Track track = Track::oval(cfg.track.outer_diameter, cfg.track.aspect_ratio,
                                  cfg.track.half_width, cfg.track.spacing);

  std::mt19937_64 rng(cfg.rng_seed);
  const double start_s =
      std::uniform_real_distribution<double>(0.0, track.perimeter())(rng);
  const LeadScript lead(cfg.lead, start_s + cfg.lead.start_gap,
                        track.perimeter(), rng());
  const CameraModel cam =
      CameraModel::from_fov(cfg.camera.width, cfg.camera.height,
                            cfg.camera.fov_deg * M_PI / 180.0,
                            cfg.camera.mount_height);

  DriverParams dp = cfg.driver;
  dp.dt = cfg.dt;
  Controller controller(dp);
  SpeedPid pid(cfg.vehicle.pid);

  VehicleState veh;
  {
    const Vec2 p0 = track.point_at_arclength(start_s);
    veh = {p0.x, p0.y, track.tangent_at_arclength(start_s), 0.0};
  }

  RunResult result;
  result.outcome = RunOutcome::ok;

  // Lap progress via the unwrapped polar angle about the track center.
  double prev_ang = std::atan2(veh.y, veh.x);
  double unwrapped = 0.0;
  int laps_done = 0;

  // Zero-order-held sensor values.
  FeatureAngles cm_angles{};
  double theta_far_det = 0.0;
  double next_costmap_t = 0.0;
  double next_detection_t = 0.0;
  double last_detection_t = 0.0;
  bool have_detection = false;

  const double nominal_time =
      cfg.laps * track.perimeter() / cfg.v_target + 30.0;
  const auto max_steps = static_cast<std::size_t>(5.0 * nominal_time / cfg.dt);

  for (std::size_t k = 0; k < max_steps; ++k) {
    const double t = k * cfg.dt;

    FeatureAngles angles{};
    bool failed = false;
    switch (cfg.experiment) {
      case Experiment::baseline: {
        const auto gt = ground_truth_angles(track, veh);
        if (!gt) failed = true;
        else angles = *gt;
        break;
      }
      case Experiment::costmap: {
        if (t + 1e-9 >= next_costmap_t) {
          const auto a = costmap_angles(render_cost_map(track, veh));
          if (!a) { failed = true; break; }
          cm_angles = *a;
          next_costmap_t += 1.0 / cfg.costmap_rate_hz;
        }
        angles = cm_angles;
        break;
      }
      case Experiment::vehicle_follow: {
        if (t + 1e-9 >= next_costmap_t) {
          const auto a = costmap_angles(render_cost_map(track, veh));
          if (!a) { failed = true; break; }
          cm_angles = *a;
          next_costmap_t += 1.0 / cfg.costmap_rate_hz;
        }
        if (t + 1e-9 >= next_detection_t) {
          const VehicleState lead_pose = lead.pose(track, t);
          const auto box = bounding_box_from_pose(cam, veh, lead_pose, cfg.lead.dims);
          if (box) {
            theta_far_det = bearing_from_bbox(*box, cam);
            have_detection = true;
            last_detection_t = t;
          } else if (!have_detection || t - last_detection_t > cfg.dropout_hold_s) {
            failed = true;
            break;
          }
          next_detection_t += 1.0 / cfg.detection_rate_hz;
        }
        angles.theta_near = cm_angles.theta_near;
        angles.theta_far = theta_far_det;
        break;
      }
    }
    if (failed) {
      result.outcome = RunOutcome::extraction_failure;
      break;
    }

    const SteerCommand cmd = controller.step(angles.theta_near, angles.theta_far);
    const double accel = pid.step(cfg.v_target, veh.v, cfg.dt);

    const double lat_err = track.nearest(veh.position()).signed_error;
    result.log.rows.push_back({t, veh.x, veh.y, veh.psi, veh.v, angles.theta_near,
                               angles.theta_far, cmd.steer_angle, lat_err});

    if (std::abs(lat_err) > track.half_width()) {
      result.outcome = RunOutcome::collision;
      break;
    }

    const double ang = std::atan2(veh.y, veh.x);
    unwrapped += wrap_to_pi(ang - prev_ang);
    prev_ang = ang;
    if (unwrapped >= (laps_done + 1) * 2.0 * M_PI) {
      ++laps_done;
      result.log.lap_bounds.push_back(result.log.rows.size() - 1);
      if (laps_done >= cfg.laps) break;
    }

    veh = vehicle_step(veh, cmd.steer_angle, accel, cfg.dt, cfg.vehicle.wheelbase);
  }

  if (!result.log.rows.empty()) result.metrics = compute_metrics(result.log);
  result.metrics.collided = result.outcome == RunOutcome::collision;
  result.metrics.laps_completed = laps_done;
  return result;
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& os) {
  os.precision(17);
  os << "t,x,y,psi,v,theta_near,theta_far,steer_cmd,lat_err\n";
  for (const auto& r : log.rows)
    os << r.t << ',' << r.x << ',' << r.y << ',' << r.psi << ',' << r.v << ','
       << r.theta_near << ',' << r.theta_far << ',' << r.steer_cmd << ','
       << r.lat_err << '\n';
}

std::string trajectory_csv(const TrajectoryLog& log) {
  std::ostringstream os;
  write_trajectory_csv(log, os);
  return os.str();
}

void write_metrics(const Metrics& m, std::uint64_t seed, std::ostream& os) {
  os.precision(17);
  os << "mean_abs_lat_err=" << m.mean_abs_lat_err << '\n'
     << "std_lat_err=" << m.std_lat_err << '\n'
     << "laps_completed=" << m.laps_completed << '\n'
     << "collided=" << (m.collided ? "true" : "false") << '\n'
     << "seed=" << seed << '\n';
}

}  // namespace tpv
