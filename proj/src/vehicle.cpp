#include "tpv/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tpv {

Vec2 VehicleState::heading() const { return {std::cos(psi), std::sin(psi)}; }

VehicleState vehicle_step(const VehicleState& s, double steer, double accel,
                          double dt, double wheelbase) {
  if (!(dt > 0.0)) throw std::invalid_argument("vehicle: dt must be > 0");
  if (!(wheelbase > 0.0)) throw std::invalid_argument("vehicle: wheelbase must be > 0");
  if (!std::isfinite(steer) || !std::isfinite(accel) || !std::isfinite(s.x) ||
      !std::isfinite(s.y) || !std::isfinite(s.psi) || !std::isfinite(s.v))
    throw std::invalid_argument("vehicle: non-finite input");

  VehicleState out;
  out.x = s.x + s.v * std::cos(s.psi) * dt;
  out.y = s.y + s.v * std::sin(s.psi) * dt;
  out.psi = wrap_to_pi(s.psi + s.v / wheelbase * std::tan(steer) * dt);
  out.v = std::max(0.0, s.v + accel * dt);
  return out;
}

double SpeedPid::step(double v_target, double v, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid: dt must be > 0");
  const double e = v_target - v;
  const double integ_next =
      std::clamp(integ_ + e * dt, -params_.integ_max, params_.integ_max);
  const double u = params_.kp * e + params_.ki * integ_next +
                   params_.kd * (e - prev_err_) / dt;
  const double u_sat = std::clamp(u, -params_.a_max, params_.a_max);
  // Accumulate unless doing so would push further into saturation.
  if (u == u_sat || (u > u_sat && e < 0.0) || (u < u_sat && e > 0.0))
    integ_ = integ_next;
  prev_err_ = e;
  return u_sat;
}

void SpeedPid::reset() {
  integ_ = 0.0;
  prev_err_ = 0.0;
}

}  // namespace tpv
