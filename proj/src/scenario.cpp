#include "negosim/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace negosim {

void validate(const ScenarioConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("scenario config: " + what);
  };
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) fail("dt must be positive");
  if (cfg.horizon <= 0) fail("horizon must be positive");
  if (!(cfg.lateral_duration > 0.0)) fail("lateral_duration must be positive");
  if (!(cfg.accel_min < 0.0) || !(cfg.accel_max > 0.0))
    fail("accel bounds must straddle zero");
  if (!(cfg.vehicle_length > 0.0)) fail("vehicle_length must be positive");

  const VehicleState* all[] = {&cfg.initial.hav, &cfg.initial.hv,
                               &cfg.initial.lv, &cfg.initial.tlv};
  for (const VehicleState* s : all) {
    if (!std::isfinite(s->x) || !std::isfinite(s->v) || !std::isfinite(s->a))
      fail("non-finite vehicle state");
    if (s->v < 0.0) fail("speeds must be non-negative");
  }
  if (cfg.initial.hav.role != Role::Changer ||
      cfg.initial.hv.role != Role::Follower ||
      cfg.initial.lv.role != Role::CurrentLead ||
      cfg.initial.tlv.role != Role::TargetLead)
    fail("role fields must match scene slots");

  const double len = cfg.vehicle_length;
  // Target lane: follower behind the changer's abscissa, lead ahead of both.
  if (!(cfg.initial.hv.x < cfg.initial.hav.x - 0.5 * len))
    fail("follower must start behind the changer");
  if (!(cfg.initial.tlv.x > cfg.initial.hav.x + 0.5 * len))
    fail("target lead must start ahead of the changer");
  if (!(cfg.initial.tlv.x > cfg.initial.hv.x + len))
    fail("target lead must start ahead of the follower");
  if (!(cfg.initial.lv.x > cfg.initial.hav.x + len))
    fail("current lead must start ahead of the changer");
}

KinematicStep step_kinematics(double x, double v, double a, double dt) {
  if (a < 0.0 && v + a * dt < 0.0) {
    // Stop inside the step: advance to the standstill point only.
    const double t_stop = -v / a;
    return {x + v * t_stop + 0.5 * a * t_stop * t_stop, 0.0};
  }
  return {x + v * dt + 0.5 * a * dt * dt, v + a * dt};
}

double car_following_accel(const VehicleState& self, const VehicleState* lead,
                           double desired_speed, double accel_min,
                           double accel_max) {
  // Intelligent-driver-model shape: free-road relaxation toward the desired
  // speed plus a gap term that grows with closing speed.
  constexpr double kMaxAccel = 1.5;
  constexpr double kComfortBrake = 2.0;
  constexpr double kMinGap = 2.0;
  constexpr double kTimeHeadway = 1.2;

  const double v0 = desired_speed > 0.1 ? desired_speed : 0.1;
  double ratio = self.v / v0;
  double accel = kMaxAccel * (1.0 - ratio * ratio * ratio * ratio);
  if (lead != nullptr) {
    const double gap = lead->x - self.x;
    const double closing = self.v - lead->v;
    const double s_star =
        kMinGap + self.v * kTimeHeadway +
        self.v * closing / (2.0 * std::sqrt(kMaxAccel * kComfortBrake));
    const double safe_gap = gap > 0.1 ? gap : 0.1;
    const double interaction = s_star > 0.0 ? s_star / safe_gap : 0.0;
    accel -= kMaxAccel * interaction * interaction;
  }
  if (accel < accel_min) accel = accel_min;
  if (accel > accel_max) accel = accel_max;
  return accel;
}

double surrounding_accel(SurroundingPolicy policy, const VehicleState& self,
                         const VehicleState* lead, double desired_speed,
                         double accel_min, double accel_max) {
  switch (policy) {
    case SurroundingPolicy::ConstantSpeed:
      return 0.0;
    case SurroundingPolicy::CarFollowing:
      if (lead == nullptr) return 0.0;
      return car_following_accel(self, lead, desired_speed, accel_min,
                                 accel_max);
  }
  return 0.0;
}

const char* to_string(SurroundingPolicy p) {
  return p == SurroundingPolicy::ConstantSpeed ? "constant_speed"
                                               : "car_following";
}

bool parse_surrounding_policy(const std::string& s, SurroundingPolicy& out) {
  if (s == "constant_speed") out = SurroundingPolicy::ConstantSpeed;
  else if (s == "car_following") out = SurroundingPolicy::CarFollowing;
  else return false;
  return true;
}

}  // namespace negosim
