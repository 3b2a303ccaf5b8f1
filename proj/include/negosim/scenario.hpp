#pragma once

#include "negosim/types.hpp"

#include <cstdint>

namespace negosim {

enum class SurroundingPolicy { ConstantSpeed, CarFollowing };

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::DLC;
  Scene initial;
  double dt = 0.2;                  // s
  int horizon = 300;                // steps
  double lateral_duration = 3.0;    // s, committed lane-change ramp
  uint64_t rng_seed = 0;
  SurroundingPolicy surrounding = SurroundingPolicy::ConstantSpeed;

  double accel_min = -4.0;          // m/s^2 command bounds
  double accel_max = 3.0;
  double vehicle_length = 5.0;      // m, for overlap checks
};

// Validation failures throw std::invalid_argument naming the field.
void validate(const ScenarioConfig& cfg);

// Constant-acceleration step with a hard stop at v = 0: when the commanded
// deceleration would cross zero speed inside the step, position advances only
// to the stop point.
struct KinematicStep {
  double x;
  double v;
};
KinematicStep step_kinematics(double x, double v, double a, double dt);

// Acceleration command for an uncontrolled surrounding vehicle (current-lane
// or target-lane lead). `lead` may be null when nobody is ahead;
// `desired_speed` is the speed the vehicle relaxes back to on a free road.
double surrounding_accel(SurroundingPolicy policy, const VehicleState& self,
                         const VehicleState* lead, double desired_speed,
                         double accel_min, double accel_max);

// Bounded car-following command, non-increasing in closing speed. Also used
// for the changer's own longitudinal control during an episode.
double car_following_accel(const VehicleState& self, const VehicleState* lead,
                           double desired_speed, double accel_min,
                           double accel_max);

const char* to_string(SurroundingPolicy p);
bool parse_surrounding_policy(const std::string& s, SurroundingPolicy& out);

}  // namespace negosim
