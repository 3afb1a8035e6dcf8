#include "tpv/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tpv {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::baseline: return "baseline";
    case Experiment::costmap: return "costmap";
    case Experiment::vehicle_follow: return "vehicle_follow";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  try {
    driver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (laps < 1) throw ConfigError("sim.laps must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("sim.dt must be > 0");
  if (!(v_target > 0.0)) throw ConfigError("sim.v_target must be > 0");
  if (!(costmap_rate_hz > 0.0)) throw ConfigError("sim.costmap_rate_hz must be > 0");
  if (!(detection_rate_hz > 0.0)) throw ConfigError("sim.detection_rate_hz must be > 0");
  if (dropout_hold_s < 0.0) throw ConfigError("sim.dropout_hold_s must be >= 0");
  if (!(track.half_width > 0.0)) throw ConfigError("track.half_width must be > 0");
  if (!(track.spacing > 0.0) || track.spacing > 0.05)
    throw ConfigError("track.spacing must be in (0, 0.05]");
  if (!(track.aspect_ratio > 0.0) || track.aspect_ratio > 1.0)
    throw ConfigError("track.aspect_ratio must be in (0, 1]");
  if (track.outer_diameter <= 4.0 * track.half_width)
    throw ConfigError("track.outer_diameter must exceed 4*track.half_width");
  if (!(vehicle.wheelbase > 0.0)) throw ConfigError("vehicle.wheelbase must be > 0");
  if (!(vehicle.pid.a_max > 0.0)) throw ConfigError("vehicle.a_max must be > 0");
  if (vehicle.pid.integ_max < 0.0) throw ConfigError("vehicle.integ_max must be >= 0");
  if (!(lead.speed > 0.0)) throw ConfigError("lead.speed must be > 0");
  if (lead.start_gap <= 0.0) throw ConfigError("lead.start_gap must be > 0");
  if (lead.amplitude < 0.0) throw ConfigError("lead.amplitude must be >= 0");
  if (!(lead.dims.length > 0.0) || !(lead.dims.width > 0.0) || !(lead.dims.height > 0.0))
    throw ConfigError("lead dims must be positive");
  if (camera.width < 2 || camera.height < 2) throw ConfigError("camera size too small");
  if (!(camera.fov_deg > 0.0) || camera.fov_deg >= 180.0)
    throw ConfigError("camera.fov_deg must be in (0, 180)");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": '" + v + "'");
  }
  if (pos != v.size() || !std::isfinite(d))
    throw ConfigError("invalid number for " + key + ": '" + v + "'");
  return d;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long i;
  try {
    i = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError("invalid integer for " + key + ": '" + v + "'");
  return i;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment",
       [](ScenarioConfig& c, const std::string& v) {
         if (v == "baseline") c.experiment = Experiment::baseline;
         else if (v == "costmap") c.experiment = Experiment::costmap;
         else if (v == "vehicle_follow") c.experiment = Experiment::vehicle_follow;
         else throw ConfigError("experiment must be baseline, costmap, or vehicle_follow");
       }},
      {"sim.laps", [](ScenarioConfig& c, const std::string& v) { c.laps = static_cast<int>(to_int("sim.laps", v)); }},
      {"sim.v_target", [](ScenarioConfig& c, const std::string& v) { c.v_target = to_double("sim.v_target", v); }},
      {"sim.dt",
       [](ScenarioConfig& c, const std::string& v) {
         c.dt = to_double("sim.dt", v);
         c.driver.dt = c.dt;
       }},
      {"sim.seed", [](ScenarioConfig& c, const std::string& v) { c.rng_seed = static_cast<std::uint64_t>(to_int("sim.seed", v)); }},
      {"sim.costmap_rate_hz", [](ScenarioConfig& c, const std::string& v) { c.costmap_rate_hz = to_double("sim.costmap_rate_hz", v); }},
      {"sim.detection_rate_hz", [](ScenarioConfig& c, const std::string& v) { c.detection_rate_hz = to_double("sim.detection_rate_hz", v); }},
      {"sim.dropout_hold_s", [](ScenarioConfig& c, const std::string& v) { c.dropout_hold_s = to_double("sim.dropout_hold_s", v); }},
      {"driver.T_N", [](ScenarioConfig& c, const std::string& v) { c.driver.T_N = to_double("driver.T_N", v); }},
      {"driver.T_P", [](ScenarioConfig& c, const std::string& v) { c.driver.T_P = to_double("driver.T_P", v); }},
      {"driver.K_a", [](ScenarioConfig& c, const std::string& v) { c.driver.K_a = to_double("driver.K_a", v); }},
      {"driver.K_c", [](ScenarioConfig& c, const std::string& v) { c.driver.K_c = to_double("driver.K_c", v); }},
      {"driver.T_L", [](ScenarioConfig& c, const std::string& v) { c.driver.T_L = to_double("driver.T_L", v); }},
      {"driver.T_I", [](ScenarioConfig& c, const std::string& v) { c.driver.T_I = to_double("driver.T_I", v); }},
      {"driver.steer_gain", [](ScenarioConfig& c, const std::string& v) { c.driver.steer_gain = to_double("driver.steer_gain", v); }},
      {"driver.delta_max", [](ScenarioConfig& c, const std::string& v) { c.driver.delta_max = to_double("driver.delta_max", v); }},
      {"track.outer_diameter", [](ScenarioConfig& c, const std::string& v) { c.track.outer_diameter = to_double("track.outer_diameter", v); }},
      {"track.aspect_ratio", [](ScenarioConfig& c, const std::string& v) { c.track.aspect_ratio = to_double("track.aspect_ratio", v); }},
      {"track.half_width", [](ScenarioConfig& c, const std::string& v) { c.track.half_width = to_double("track.half_width", v); }},
      {"track.spacing", [](ScenarioConfig& c, const std::string& v) { c.track.spacing = to_double("track.spacing", v); }},
      {"vehicle.wheelbase", [](ScenarioConfig& c, const std::string& v) { c.vehicle.wheelbase = to_double("vehicle.wheelbase", v); }},
      {"vehicle.kp", [](ScenarioConfig& c, const std::string& v) { c.vehicle.pid.kp = to_double("vehicle.kp", v); }},
      {"vehicle.ki", [](ScenarioConfig& c, const std::string& v) { c.vehicle.pid.ki = to_double("vehicle.ki", v); }},
      {"vehicle.kd", [](ScenarioConfig& c, const std::string& v) { c.vehicle.pid.kd = to_double("vehicle.kd", v); }},
      {"vehicle.a_max", [](ScenarioConfig& c, const std::string& v) { c.vehicle.pid.a_max = to_double("vehicle.a_max", v); }},
      {"vehicle.integ_max", [](ScenarioConfig& c, const std::string& v) { c.vehicle.pid.integ_max = to_double("vehicle.integ_max", v); }},
      {"lead.speed", [](ScenarioConfig& c, const std::string& v) { c.lead.speed = to_double("lead.speed", v); }},
      {"lead.start_gap", [](ScenarioConfig& c, const std::string& v) { c.lead.start_gap = to_double("lead.start_gap", v); }},
      {"lead.amplitude", [](ScenarioConfig& c, const std::string& v) { c.lead.amplitude = to_double("lead.amplitude", v); }},
      {"lead.length", [](ScenarioConfig& c, const std::string& v) { c.lead.dims.length = to_double("lead.length", v); }},
      {"lead.width", [](ScenarioConfig& c, const std::string& v) { c.lead.dims.width = to_double("lead.width", v); }},
      {"lead.height", [](ScenarioConfig& c, const std::string& v) { c.lead.dims.height = to_double("lead.height", v); }},
      {"camera.width", [](ScenarioConfig& c, const std::string& v) { c.camera.width = static_cast<int>(to_int("camera.width", v)); }},
      {"camera.height", [](ScenarioConfig& c, const std::string& v) { c.camera.height = static_cast<int>(to_int("camera.height", v)); }},
      {"camera.fov_deg", [](ScenarioConfig& c, const std::string& v) { c.camera.fov_deg = to_double("camera.fov_deg", v); }},
      {"camera.mount_height", [](ScenarioConfig& c, const std::string& v) { c.camera.mount_height = to_double("camera.mount_height", v); }},
  };
  return table;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      std::ostringstream msg;
      msg << "unknown key '" << key << "'. Valid keys:";
      for (const auto& [k, _] : setters()) msg << ' ' << k;
      throw ConfigError(msg.str());
    }
    it->second(cfg, value);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace tpv
