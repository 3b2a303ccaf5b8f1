#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

namespace negosim {

inline constexpr const char* kVersion = "0.1.0";

enum class Role { Changer, Follower, CurrentLead, TargetLead };

// Lane occupancy is tracked as the changer's origin lane vs. its target lane.
enum class Lane { Current, Target };

enum class ScenarioKind { MLC, DLC };

// Follower action set. Enum order doubles as the deterministic tie-break
// order (Maintain first), so do not reorder.
enum class HvAction { Maintain = 0, Accelerate = 1, Decelerate = 2 };

enum class HavAction { LaneChange = 0, Yield = 1 };

enum class DriverType { Cooperative = 0, NonCooperative = 1 };

struct VehicleState {
  int id = 0;
  Role role = Role::Changer;
  double x = 0.0;               // longitudinal position, m
  Lane lane = Lane::Current;
  double v = 0.0;               // speed, m/s (never negative)
  double a = 0.0;               // acceleration, m/s^2
  double lateral_progress = 0;  // 0 = fully in `lane`, 1 = fully in the other
};

// Snapshot of the four interacting vehicles.
struct Scene {
  VehicleState hav;  // lane changer
  VehicleState hv;   // follower in target lane
  VehicleState lv;   // lead in current lane
  VehicleState tlv;  // lead in target lane

  const VehicleState& by_role(Role r) const {
    switch (r) {
      case Role::Changer: return hav;
      case Role::Follower: return hv;
      case Role::CurrentLead: return lv;
      default: return tlv;
    }
  }
  VehicleState& by_role(Role r) {
    return const_cast<VehicleState&>(
        static_cast<const Scene&>(*this).by_role(r));
  }
};

struct Weights {
  double w_e = 0.0;  // efficiency
  double w_s = 0.0;  // safety
  double w_a = 0.0;  // altruism (changer payoff share felt by a cooperative follower)
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

const char* to_string(Role r);
const char* to_string(HvAction a);
const char* to_string(HavAction a);
const char* to_string(DriverType t);
const char* to_string(ScenarioKind k);
const char* to_string(Lane l);

bool parse_hv_action(const std::string& s, HvAction& out);
bool parse_scenario_kind(const std::string& s, ScenarioKind& out);

// Throwing variants for deserialization paths.
Role parse_role(const std::string& s);
DriverType parse_driver_type(const std::string& s);
ScenarioKind parse_scenario_kind_or_throw(const std::string& s);

}  // namespace negosim
