#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "negosim/disclosure.hpp"
#include "negosim/game.hpp"

using namespace negosim;

namespace {

// Equilibrium whose every column predicts `resp`, intending `intent`.
Equilibrium flat_eq(HavAction intent, HvAction resp) {
  Equilibrium eq;
  eq.hav_choice = intent;
  for (int col = 0; col < kNumColumns; ++col) eq.hv_response[col] = resp;
  return eq;
}

TrustBelief belief_at(double tau) {
  TrustBelief b;
  b.tau = tau;
  return b;
}

DisclosureConfig deceptive_cfg() {
  DisclosureConfig cfg;
  cfg.policy = DisclosurePolicy::Deceptive;
  cfg.mode = TrustThresholdMode::RelativeLoss;
  cfg.threshold = 0.5;
  return cfg;
}

}  // namespace

TEST_CASE("likely type threshold is inclusive at one half") {
  CHECK(likely_type(belief_at(0.5)) == DriverType::Cooperative);
  CHECK(likely_type(belief_at(0.51)) == DriverType::Cooperative);
  CHECK(likely_type(belief_at(0.49)) == DriverType::NonCooperative);
}

TEST_CASE("trust protection thresholds") {
  // Relative loss: terminate below half the reference.
  CHECK_FALSE(trust_protection_terminates(0.46, 0.91,
                                          TrustThresholdMode::RelativeLoss,
                                          0.5));
  CHECK(trust_protection_terminates(0.39, 0.91,
                                    TrustThresholdMode::RelativeLoss, 0.5));
  // Exactly at the bound continues.
  CHECK_FALSE(trust_protection_terminates(0.455, 0.91,
                                          TrustThresholdMode::RelativeLoss,
                                          0.5));
  // Absolute floor ignores the reference.
  CHECK(trust_protection_terminates(0.39, 0.91, TrustThresholdMode::Absolute,
                                    0.4));
  CHECK_FALSE(trust_protection_terminates(0.41, 0.1,
                                          TrustThresholdMode::Absolute, 0.4));
}

TEST_CASE("honest policy always shows the intent") {
  DisclosureConfig cfg;
  cfg.policy = DisclosurePolicy::Honest;
  DisclosureState st;
  const Equilibrium eq = flat_eq(HavAction::Yield, HvAction::Decelerate);
  choose_disclosure(eq, eq, belief_at(0.9), cfg, st);
  CHECK(st.intended == HavAction::Yield);
  CHECK(st.disclosed == HavAction::Yield);
  CHECK_FALSE(st.deception_active);
}

TEST_CASE("deception entry flips the shown intent and pins the reference") {
  DisclosureState st;
  const Equilibrium eq = flat_eq(HavAction::Yield, HvAction::Decelerate);
  choose_disclosure(eq, eq, belief_at(0.8), deceptive_cfg(), st);
  CHECK(st.intended == HavAction::Yield);
  CHECK(st.disclosed == HavAction::LaneChange);
  CHECK(st.deception_active);
  CHECK(st.tau_at_start == 0.8);

  // Continuation keeps the original reference even as trust moves.
  choose_disclosure(eq, eq, belief_at(0.6), deceptive_cfg(), st);
  CHECK(st.deception_active);
  CHECK(st.tau_at_start == 0.8);
}

TEST_CASE("no deception when the flipped column would not cooperate") {
  DisclosureState st;
  const Equilibrium eq = flat_eq(HavAction::Yield, HvAction::Maintain);
  choose_disclosure(eq, eq, belief_at(0.8), deceptive_cfg(), st);
  CHECK_FALSE(st.deception_active);
  CHECK(st.disclosed == HavAction::Yield);
}

TEST_CASE("deception direction follows the current intent") {
  DisclosureState st;
  const Equilibrium eq = flat_eq(HavAction::LaneChange, HvAction::Decelerate);
  choose_disclosure(eq, eq, belief_at(0.8), deceptive_cfg(), st);
  CHECK(st.intended == HavAction::LaneChange);
  CHECK(st.disclosed == HavAction::Yield);
  CHECK(st.deception_active);
}

TEST_CASE("protective termination reveals the intent and locks the episode") {
  DisclosureState st;
  const Equilibrium eq = flat_eq(HavAction::Yield, HvAction::Decelerate);
  choose_disclosure(eq, eq, belief_at(0.8), deceptive_cfg(), st);
  REQUIRE(st.deception_active);

  // Trust fell below half the entry reference (0.8): terminate.
  choose_disclosure(eq, eq, belief_at(0.39), deceptive_cfg(), st);
  CHECK_FALSE(st.deception_active);
  CHECK(st.disclosed == HavAction::Yield);
  CHECK(st.locked_out);

  // Recovery does not reopen the channel.
  choose_disclosure(eq, eq, belief_at(0.9), deceptive_cfg(), st);
  CHECK_FALSE(st.deception_active);
  CHECK(st.disclosed == HavAction::Yield);
}

TEST_CASE("voluntary stop leaves re-entry open") {
  DisclosureState st;
  const Equilibrium deceive = flat_eq(HavAction::Yield, HvAction::Decelerate);
  const Equilibrium refuse = flat_eq(HavAction::Yield, HvAction::Maintain);

  choose_disclosure(deceive, deceive, belief_at(0.8), deceptive_cfg(), st);
  REQUIRE(st.deception_active);
  // The flipped column stops predicting cooperation: stop deceiving.
  choose_disclosure(refuse, refuse, belief_at(0.7), deceptive_cfg(), st);
  CHECK_FALSE(st.deception_active);
  CHECK_FALSE(st.locked_out);
  // Conditions return: deception may resume with a fresh reference.
  choose_disclosure(deceive, deceive, belief_at(0.7), deceptive_cfg(), st);
  CHECK(st.deception_active);
  CHECK(st.tau_at_start == 0.7);
}

TEST_CASE("absolute floor blocks entry outright") {
  DisclosureConfig cfg = deceptive_cfg();
  cfg.mode = TrustThresholdMode::Absolute;
  cfg.threshold = 0.6;
  DisclosureState st;
  const Equilibrium eq = flat_eq(HavAction::Yield, HvAction::Decelerate);
  choose_disclosure(eq, eq, belief_at(0.55), cfg, st);
  CHECK_FALSE(st.deception_active);
  CHECK(st.disclosed == HavAction::Yield);
  CHECK_FALSE(st.locked_out);
}

TEST_CASE("termination helper is a no-op when nothing is active") {
  DisclosureState st;
  st.intended = HavAction::Yield;
  st.disclosed = HavAction::Yield;
  on_termination(st);
  CHECK_FALSE(st.locked_out);
  CHECK(st.disclosed == HavAction::Yield);
}

TEST_CASE("policy and mode names round-trip") {
  DisclosurePolicy p;
  CHECK(parse_disclosure_policy("deceptive", p));
  CHECK(p == DisclosurePolicy::Deceptive);
  CHECK(parse_disclosure_policy(to_string(DisclosurePolicy::Honest), p));
  CHECK(p == DisclosurePolicy::Honest);
  CHECK_FALSE(parse_disclosure_policy("sometimes", p));

  TrustThresholdMode m;
  CHECK(parse_threshold_mode("absolute", m));
  CHECK(m == TrustThresholdMode::Absolute);
  CHECK(parse_threshold_mode(to_string(TrustThresholdMode::RelativeLoss), m));
  CHECK(m == TrustThresholdMode::RelativeLoss);
  CHECK_FALSE(parse_threshold_mode("ratio", m));
}
