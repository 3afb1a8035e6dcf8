#pragma once

#include <cstddef>
#include <vector>

#include "tpv/common.hpp"

namespace tpv {

/// Driver-model constants. Time constants in seconds; gains dimensionless.
/// The defaults are the values used throughout the experiments.
struct DriverParams {
  double T_N = 0.12;  ///< neuromuscular lag
  double T_P = 0.06;  ///< processing delay
  double K_a = 30.0;  ///< anticipatory gain
  double K_c = 10.0;  ///< compensatory gain
  double T_L = 2.8;   ///< compensatory lead time constant
  double T_I = 0.18;  ///< compensatory lag time constant
  double dt = 0.01;   ///< controller step

  double steer_gain = 0.05;  ///< rad of steering per unit of driver torque
  double delta_max = 0.35;   ///< steering saturation, rad

  /// Throws std::invalid_argument on non-positive constants or dt > T_N/10.
  void validate() const;
  std::size_t delay_length() const;  ///< round(T_P / dt)
};

struct SteerCommand {
  double torque = 0.0;       ///< driver torque output, pre-saturation
  double steer_angle = 0.0;  ///< saturate(steer_gain * torque), rad
};

/// First-order lag 1/(T s + 1), discretized with the trapezoidal rule.
class FirstOrderLag {
 public:
  FirstOrderLag(double time_constant, double dt);
  double step(double u);
  void reset() { mem_ = 0.0; }

 private:
  double b_, a1_;
  double mem_ = 0.0;
};

/// Lead-lag K (T_L s + 1)/(T_I s + 1), discretized with the trapezoidal rule.
/// Unit DC gain times K.
class LeadLag {
 public:
  LeadLag(double gain, double t_lead, double t_lag, double dt);
  double step(double u);
  void reset() { mem_ = 0.0; }

 private:
  double k_, b0_, b1_, a1_;
  double mem_ = 0.0;
};

/// Discrete-time two-point steering model. The far-point angle drives a
/// static anticipatory gain; the near-point angle passes through a transport
/// delay and a lead-lag compensator. The summed torque is filtered by the
/// neuromuscular lag and mapped to a saturated steering angle.
class Controller {
 public:
  explicit Controller(const DriverParams& params);

  /// Advance one step. Inputs must be finite with |theta| <= pi; otherwise
  /// throws and leaves the state untouched.
  SteerCommand step(double theta_near, double theta_far);

  /// Return to the rest state (all memories and the delay line zeroed).
  void reset();

  const DriverParams& params() const { return params_; }
  double last_torque() const { return last_torque_; }

 private:
  DriverParams params_;
  LeadLag compensator_;
  FirstOrderLag neuromuscular_;
  std::vector<double> delay_buf_;
  std::size_t delay_head_ = 0;
  double last_torque_ = 0.0;
};

}  // namespace tpv
