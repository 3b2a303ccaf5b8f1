#pragma once

#include "negosim/scenario.hpp"
#include "negosim/types.hpp"

#include <array>

namespace negosim {

// Commanded acceleration for each follower action, m/s^2.
struct HvKinematics {
  double accelerate = 1.5;
  double maintain = 0.0;
  double decelerate = -3.0;

  double accel_for(HvAction a) const {
    switch (a) {
      case HvAction::Accelerate: return accelerate;
      case HvAction::Decelerate: return decelerate;
      default: return maintain;
    }
  }
};

struct SafetyParams {
  double epsilon = 1e-3;  // keeps the exponent finite as min TTC -> 0
};

// Payoff column order: (Cooperative, LaneChange), (Cooperative, Yield),
// (NonCooperative, LaneChange), (NonCooperative, Yield).
inline constexpr int kNumColumns = 4;
inline constexpr int kNumActions = 3;

inline int column_index(DriverType t, HavAction d) {
  return static_cast<int>(t) * 2 + static_cast<int>(d);
}
inline HavAction column_disclosure(int col) {
  return static_cast<HavAction>(col % 2);
}
inline DriverType column_type(int col) {
  return static_cast<DriverType>(col / 2);
}

struct StageGame {
  ScenarioKind kind = ScenarioKind::DLC;
  double tau = 0.5;
  Weights weights;
  // [column][action]; action index order matches HvAction.
  std::array<std::array<double, kNumActions>, kNumColumns> u_hav{};
  std::array<std::array<double, kNumActions>, kNumColumns> u_hv{};
};

struct Equilibrium {
  HavAction hav_choice = HavAction::LaneChange;
  // Best response per (type, disclosure), indexed like the payoff columns.
  std::array<HvAction, kNumColumns> hv_response{};
  double expected_hav_payoff = 0.0;
  // Follower payoff at the best response, per column.
  std::array<double, kNumColumns> hv_payoff_at_response{};
};

// Time for the subject to close the gap to `other` at current speeds: the
// signed ratio gap / closing speed when strictly positive, +inf otherwise
// (diverging, parallel, or already overlapping).
double ttc(double x_subject, double x_other, double v_subject, double v_other);

// exp(-1 / (min TTC + eps)) over the vehicles the subject must clear for the
// column's maneuver. Changer: target-lane pair when changing, current lead
// when yielding. Follower: the changer when it changes, target lead otherwise.
double safety_payoff(const Scene& scene, Role subject, int column,
                     const SafetyParams& sp = {});

// Speed-gain potential of the subject's car-following slot for the column's
// maneuver: lead speed surplus plus lead acceleration times headway.
double efficiency_payoff(const Scene& scene, Role subject, int column);

// One-step constant-acceleration projection used for payoff evaluation:
// the follower applies the action's commanded acceleration, everyone else
// keeps their current one.
Scene project_scene(const Scene& scene, HvAction hv_action,
                    const HvKinematics& kin, double dt);

StageGame build_stage_game(const Scene& scene, ScenarioKind kind, double tau,
                           const Weights& weights,
                           const HvKinematics& kin = {}, double dt = 0.2,
                           const SafetyParams& sp = {});

// Follower best response for one column; ties break toward the lower action
// index (Maintain, then Accelerate, then Decelerate).
HvAction best_response(const StageGame& game, int column);

// Equilibrium of the one-shot incomplete-information stage: the follower
// best-responds per (type, disclosure); the changer picks the disclosure
// maximizing its type-weighted payoff, ties toward LaneChange.
Equilibrium solve_pbe(const StageGame& game);

// Exhaustive check of the same equilibrium conditions over all response
// profiles; reference implementation for testing the solver.
Equilibrium brute_force_equilibrium(const StageGame& game);

}  // namespace negosim
