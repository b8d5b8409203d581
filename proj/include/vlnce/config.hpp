#ifndef VLNCE_CONFIG_HPP
#define VLNCE_CONFIG_HPP

#include "vlnce/errors.hpp"

namespace vlnce {

/// Simulator and evaluation parameters shared by every module.
struct SimConfig {
  double forward_step = 0.25;   // meters per Forward
  int turn_increment = 30;      // degrees per TurnLeft/TurnRight
  bool sliding_allowed = false;
  int max_steps = 500;
  double success_threshold = 3.0;
  double dtw_threshold = 3.0;
  double raycast_max_range = 5.0;
  double deadlock_epsilon = 1e-6;

  int views_per_scan() const { return 360 / turn_increment; }

  void validate() const {
    if (!(forward_step > 0.0)) throw ConfigError("forward_step must be positive");
    if (turn_increment <= 0 || 360 % turn_increment != 0)
      throw ConfigError("turn_increment must divide 360");
    if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
    if (!(success_threshold > 0.0) || !(dtw_threshold > 0.0) || !(raycast_max_range > 0.0) ||
        !(deadlock_epsilon > 0.0))
      throw ConfigError("thresholds must be positive");
  }
};

}  // namespace vlnce

#endif  // VLNCE_CONFIG_HPP
