#include "tpv/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tpv {

void DriverParams::validate() const {
  if (!(T_N > 0.0)) throw std::invalid_argument("driver: T_N must be > 0");
  if (!(T_P >= 0.0)) throw std::invalid_argument("driver: T_P must be >= 0");
  if (!(T_L > 0.0)) throw std::invalid_argument("driver: T_L must be > 0");
  if (!(T_I > 0.0)) throw std::invalid_argument("driver: T_I must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("driver: dt must be > 0");
  if (dt > T_N / 10.0 + 1e-12)
    throw std::invalid_argument("driver: dt must not exceed T_N/10");
  if (!(steer_gain > 0.0)) throw std::invalid_argument("driver: steer_gain must be > 0");
  if (!(delta_max > 0.0)) throw std::invalid_argument("driver: delta_max must be > 0");
  if (!std::isfinite(K_a) || !std::isfinite(K_c))
    throw std::invalid_argument("driver: gains must be finite");
}

std::size_t DriverParams::delay_length() const {
  return static_cast<std::size_t>(std::llround(T_P / dt));
}

FirstOrderLag::FirstOrderLag(double time_constant, double dt) {
  // 1/(T s + 1) under s -> (2/dt)(1 - z^-1)/(1 + z^-1)
  const double c = dt + 2.0 * time_constant;
  b_ = dt / c;
  a1_ = (dt - 2.0 * time_constant) / c;
}

double FirstOrderLag::step(double u) {
  const double y = b_ * u + mem_;
  mem_ = b_ * u - a1_ * y;
  return y;
}

LeadLag::LeadLag(double gain, double t_lead, double t_lag, double dt) : k_(gain) {
  const double c = 1.0 + 2.0 * t_lag / dt;
  b0_ = (1.0 + 2.0 * t_lead / dt) / c;
  b1_ = (1.0 - 2.0 * t_lead / dt) / c;
  a1_ = (1.0 - 2.0 * t_lag / dt) / c;
}

double LeadLag::step(double u) {
  const double y = b0_ * u + mem_;
  mem_ = b1_ * u - a1_ * y;
  return k_ * y;
}

Controller::Controller(const DriverParams& params)
    : params_((params.validate(), params)),
      compensator_(params.K_c, params.T_L, params.T_I, params.dt),
      neuromuscular_(params.T_N, params.dt),
      delay_buf_(params.delay_length(), 0.0) {}

SteerCommand Controller::step(double theta_near, double theta_far) {
  if (!std::isfinite(theta_near) || !std::isfinite(theta_far) ||
      std::abs(theta_near) > M_PI || std::abs(theta_far) > M_PI)
    throw std::invalid_argument("controller: inputs must be finite with |theta| <= pi");

  const double torque_ant = params_.K_a * theta_far;

  double delayed = theta_near;
  if (!delay_buf_.empty()) {
    delayed = delay_buf_[delay_head_];
    delay_buf_[delay_head_] = theta_near;
    delay_head_ = (delay_head_ + 1) % delay_buf_.size();
  }
  const double torque_com = compensator_.step(delayed);

  const double torque = neuromuscular_.step(torque_ant + torque_com);
  last_torque_ = torque;

  SteerCommand cmd;
  cmd.torque = torque;
  cmd.steer_angle =
      std::clamp(params_.steer_gain * torque, -params_.delta_max, params_.delta_max);
  return cmd;
}

void Controller::reset() {
  compensator_.reset();
  neuromuscular_.reset();
  std::fill(delay_buf_.begin(), delay_buf_.end(), 0.0);
  delay_head_ = 0;
  last_torque_ = 0.0;
}

}  // namespace tpv
