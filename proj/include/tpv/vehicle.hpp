#pragma once

#include "tpv/common.hpp"

namespace tpv {

/// Planar kinematic bicycle state. Heading is CCW from +x, wrapped to
/// (-pi, pi]; speed is forward-only.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double v = 0.0;

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const;
};

/// Forward-Euler kinematic bicycle step. Throws on non-finite inputs.
VehicleState vehicle_step(const VehicleState& s, double steer, double accel,
                          double dt, double wheelbase);

struct PidParams {
  double kp = 2.0;
  double ki = 0.1;
  double kd = 0.0;
  double a_max = 4.0;      ///< acceleration saturation, m/s^2
  double integ_max = 2.0;  ///< integrator clamp
};

/// Longitudinal speed PID with clamped integrator. The integrator also stops
/// accumulating while the output is saturated in the direction of the error.
class SpeedPid {
 public:
  explicit SpeedPid(const PidParams& params = {}) : params_(params) {}

  double step(double v_target, double v, double dt);
  void reset();

  const PidParams& params() const { return params_; }
  double integrator() const { return integ_; }

 private:
  PidParams params_;
  double integ_ = 0.0;
  double prev_err_ = 0.0;
};

}  // namespace tpv
