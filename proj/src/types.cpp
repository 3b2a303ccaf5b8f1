#include "negosim/types.hpp"

#include <stdexcept>

namespace negosim {

const char* to_string(Role r) {
  switch (r) {
    case Role::Changer: return "changer";
    case Role::Follower: return "follower";
    case Role::CurrentLead: return "current_lead";
    default: return "target_lead";
  }
}

const char* to_string(HvAction a) {
  switch (a) {
    case HvAction::Maintain: return "maintain";
    case HvAction::Accelerate: return "accelerate";
    default: return "decelerate";
  }
}

const char* to_string(HavAction a) {
  return a == HavAction::LaneChange ? "lane_change" : "yield";
}

const char* to_string(DriverType t) {
  return t == DriverType::Cooperative ? "cooperative" : "noncooperative";
}

const char* to_string(ScenarioKind k) {
  return k == ScenarioKind::MLC ? "MLC" : "DLC";
}

const char* to_string(Lane l) {
  return l == Lane::Current ? "current" : "target";
}

bool parse_hv_action(const std::string& s, HvAction& out) {
  if (s == "maintain") out = HvAction::Maintain;
  else if (s == "accelerate") out = HvAction::Accelerate;
  else if (s == "decelerate") out = HvAction::Decelerate;
  else return false;
  return true;
}

bool parse_scenario_kind(const std::string& s, ScenarioKind& out) {
  if (s == "MLC" || s == "mlc") out = ScenarioKind::MLC;
  else if (s == "DLC" || s == "dlc") out = ScenarioKind::DLC;
  else return false;
  return true;
}

Role parse_role(const std::string& s) {
  if (s == "changer") return Role::Changer;
  if (s == "follower") return Role::Follower;
  if (s == "current_lead") return Role::CurrentLead;
  if (s == "target_lead") return Role::TargetLead;
  throw std::invalid_argument("unknown role '" + s + "'");
}

DriverType parse_driver_type(const std::string& s) {
  if (s == "cooperative") return DriverType::Cooperative;
  if (s == "noncooperative") return DriverType::NonCooperative;
  throw std::invalid_argument("unknown driver type '" + s + "'");
}

ScenarioKind parse_scenario_kind_or_throw(const std::string& s) {
  ScenarioKind k;
  if (!parse_scenario_kind(s, k))
    throw std::invalid_argument("unknown scenario kind '" + s + "'");
  return k;
}

}  // namespace negosim
