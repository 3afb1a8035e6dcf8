#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tpv/controller.hpp"
#include "tpv/perception.hpp"
#include "tpv/vehicle.hpp"

namespace tpv {

enum class Experiment { baseline, costmap, vehicle_follow };

std::string to_string(Experiment e);

struct TrackConfig {
  double outer_diameter = 30.0;
  double aspect_ratio = 0.75;
  double half_width = 1.5;
  double spacing = 0.05;
};

struct VehicleConfig {
  double wheelbase = 0.57;
  PidParams pid;
};

struct LeadConfig {
  double speed = 4.0;
  double start_gap = 5.0;  ///< initial arc-length gap ahead of the trailing car
  double amplitude = 0.4;  ///< max lateral wander off the centerline, m
  VehicleDims dims;
};

struct CameraConfig {
  int width = 416;
  int height = 416;
  double fov_deg = 60.0;
  double mount_height = 0.2;
};

struct ScenarioConfig {
  Experiment experiment = Experiment::baseline;
  int laps = 5;
  double v_target = 4.0;
  double dt = 0.01;
  std::uint64_t rng_seed = 0;
  double costmap_rate_hz = 40.0;
  double detection_rate_hz = 13.0;
  double dropout_hold_s = 0.5;  ///< hold last detection before aborting

  DriverParams driver;
  TrackConfig track;
  VehicleConfig vehicle;
  LeadConfig lead;
  CameraConfig camera;

  /// Throws ConfigError when any invariant is violated.
  void validate() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse a plain-text "section.key = value" configuration. Lines beginning
/// with '#' and blank lines are ignored; every key is optional and falls back
/// to its default. Unknown keys and out-of-range values raise ConfigError.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

}  // namespace tpv
