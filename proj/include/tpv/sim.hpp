#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tpv/config.hpp"
#include "tpv/track.hpp"
#include "tpv/vehicle.hpp"

namespace tpv {

/// Scripted lead vehicle: drives the centerline at constant speed in arc
/// length with a seeded, lap-periodic lateral wander (sum of low-frequency
/// sinusoids whose amplitudes sum to `amplitude`).
class LeadScript {
 public:
  LeadScript(const LeadConfig& cfg, double start_arclength, double perimeter,
             std::uint64_t seed);

  double lateral_offset(double t) const;
  VehicleState pose(const Track& track, double t) const;
  double lap_time() const { return lap_time_; }

 private:
  double speed_;
  double start_s_;
  double amplitude_;
  double lap_time_;
  double phase_[3];
};

struct StepRecord {
  double t, x, y, psi, v;
  double theta_near, theta_far;
  double steer_cmd;
  double lat_err;
};

struct TrajectoryLog {
  std::vector<StepRecord> rows;
  std::vector<std::size_t> lap_bounds;  ///< first row index of each new lap
};

struct Metrics {
  double mean_abs_lat_err = 0.0;
  double std_lat_err = 0.0;
  bool collided = false;
  int laps_completed = 0;
};

enum class RunOutcome { ok, collision, extraction_failure };

struct RunResult {
  TrajectoryLog log;
  Metrics metrics;
  RunOutcome outcome = RunOutcome::ok;
};

/// Run one closed-loop scenario. Deterministic for a given config and seed.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Mean and population standard deviation of |lat_err| over all rows.
/// Throws std::invalid_argument on an empty log.
Metrics compute_metrics(const TrajectoryLog& log);

/// CSV with the exact header t,x,y,psi,v,theta_near,theta_far,steer_cmd,lat_err.
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& os);
std::string trajectory_csv(const TrajectoryLog& log);

/// Flat key=value block: mean_abs_lat_err, std_lat_err, laps_completed,
/// collided, seed.
void write_metrics(const Metrics& m, std::uint64_t seed, std::ostream& os);

}  // namespace tpv
