#include "negosim/disclosure.hpp"

namespace negosim {

DriverType likely_type(const TrustBelief& belief) {
  return belief.tau >= 0.5 ? DriverType::Cooperative
                           : DriverType::NonCooperative;
}

bool trust_protection_terminates(double tau_now, double tau_ref,
                                 TrustThresholdMode mode, double threshold) {
  if (mode == TrustThresholdMode::RelativeLoss)
    return tau_now < threshold * tau_ref;
  return tau_now < threshold;
}

void on_termination(DisclosureState& state) {
  if (!state.deception_active) return;
  state.disclosed = state.intended;
  state.deception_active = false;
  state.locked_out = true;
}

namespace {

HavAction opposite(HavAction a) {
  return a == HavAction::LaneChange ? HavAction::Yield : HavAction::LaneChange;
}

}  // namespace

void choose_disclosure(const Equilibrium& eq_truthful,
                       const Equilibrium& eq_deceptive,
                       const TrustBelief& belief, const DisclosureConfig& cfg,
                       DisclosureState& state) {
  const HavAction intended = eq_truthful.hav_choice;
  state.intended = intended;

  if (cfg.policy == DisclosurePolicy::Honest) {
    state.disclosed = intended;
    state.deception_active = false;
    return;
  }

  // An active deception is checked against the protection rule before
  // anything is shown this step.
  if (state.deception_active &&
      trust_protection_terminates(belief.tau, state.tau_at_start, cfg.mode,
                                  cfg.threshold)) {
    on_termination(state);
    return;
  }

  const HavAction candidate = opposite(intended);
  const int col = column_index(likely_type(belief), candidate);
  const bool would_yield =
      eq_deceptive.hv_response[col] == HvAction::Decelerate;

  // Entry (or continuation under a new intent) also passes through the
  // protection rule; for a fresh deception the reference is today's trust.
  const double ref = state.deception_active ? state.tau_at_start : belief.tau;
  const bool guarded =
      trust_protection_terminates(belief.tau, ref, cfg.mode, cfg.threshold);

  if (!state.locked_out && would_yield && !guarded) {
    if (!state.deception_active) state.tau_at_start = belief.tau;
    state.deception_active = true;
    state.disclosed = candidate;
    return;
  }

  // No (further) deception: show the intent. A voluntary stop keeps re-entry
  // open; only protective stops lock the episode.
  state.disclosed = intended;
  state.deception_active = false;
}

const char* to_string(DisclosurePolicy p) {
  return p == DisclosurePolicy::Honest ? "honest" : "deceptive";
}

const char* to_string(TrustThresholdMode m) {
  return m == TrustThresholdMode::RelativeLoss ? "relative_loss" : "absolute";
}

bool parse_disclosure_policy(const std::string& s, DisclosurePolicy& out) {
  if (s == "honest") out = DisclosurePolicy::Honest;
  else if (s == "deceptive") out = DisclosurePolicy::Deceptive;
  else return false;
  return true;
}

bool parse_threshold_mode(const std::string& s, TrustThresholdMode& out) {
  if (s == "relative_loss") out = TrustThresholdMode::RelativeLoss;
  else if (s == "absolute") out = TrustThresholdMode::Absolute;
  else return false;
  return true;
}

}  // namespace negosim
