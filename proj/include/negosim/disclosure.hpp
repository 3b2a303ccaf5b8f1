#pragma once

#include "negosim/game.hpp"
#include "negosim/trust.hpp"

namespace negosim {

enum class DisclosurePolicy { Honest, Deceptive };

enum class TrustThresholdMode { RelativeLoss, Absolute };

struct DisclosureConfig {
  DisclosurePolicy policy = DisclosurePolicy::Honest;
  TrustThresholdMode mode = TrustThresholdMode::RelativeLoss;
  double threshold = 0.5;  // fraction of entry trust (relative) or floor (absolute)
};

struct DisclosureState {
  HavAction intended = HavAction::Yield;
  HavAction disclosed = HavAction::Yield;
  bool deception_active = false;
  double tau_at_start = 0.0;   // trust when the current deception began
  bool locked_out = false;     // protective termination bars re-entry
};

// True when the protection rule says an active deception must stop.
bool trust_protection_terminates(double tau_now, double tau_ref,
                                 TrustThresholdMode mode, double threshold);

// Protective stop: reveal the intent and bar re-entry for the episode.
void on_termination(DisclosureState& state);

// Picks what the eHMI shows this step. Honest policy always shows the
// intent. The deceptive policy shows the opposite when the predicted
// follower response to that signal is Decelerate (the both-yield outcome)
// and the trust protection rule allows it; an active deception whose trust
// check fails is terminated protectively before anything is shown.
// `eq_truthful` supplies the intent, `eq_deceptive` the predicted response
// to the flipped signal (callers typically pass the same equilibrium).
void choose_disclosure(const Equilibrium& eq_truthful,
                       const Equilibrium& eq_deceptive,
                       const TrustBelief& belief, const DisclosureConfig& cfg,
                       DisclosureState& state);

// Type a best-response prediction is evaluated against: the more likely one
// under the current belief (ties go to Cooperative).
DriverType likely_type(const TrustBelief& belief);

const char* to_string(DisclosurePolicy p);
const char* to_string(TrustThresholdMode m);
bool parse_disclosure_policy(const std::string& s, DisclosurePolicy& out);
bool parse_threshold_mode(const std::string& s, TrustThresholdMode& out);

}  // namespace negosim
