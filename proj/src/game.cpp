#include "negosim/game.hpp"

#include <cmath>

namespace negosim {

double ttc(double x_subject, double x_other, double v_subject, double v_other) {
  const double gap = x_other - x_subject;
  const double closing = v_subject - v_other;
  if (closing == 0.0) return kInf;
  const double t = gap / closing;
  return t > 0.0 ? t : kInf;
}

namespace {

// Vehicles the subject must clear for the column's maneuver.
void relevant_set(Role subject, HavAction disclosure, Role out[2], int& n) {
  n = 0;
  if (subject == Role::Changer) {
    if (disclosure == HavAction::LaneChange) {
      out[n++] = Role::TargetLead;
      out[n++] = Role::Follower;
    } else {
      out[n++] = Role::CurrentLead;
    }
  } else {
    out[n++] = disclosure == HavAction::LaneChange ? Role::Changer
                                                   : Role::TargetLead;
  }
}

Role reference_lead(Role subject, HavAction disclosure) {
  if (subject == Role::Changer)
    return disclosure == HavAction::LaneChange ? Role::TargetLead
                                               : Role::CurrentLead;
  return disclosure == HavAction::LaneChange ? Role::Changer
                                             : Role::TargetLead;
}

}  // namespace

double safety_payoff(const Scene& scene, Role subject, int column,
                     const SafetyParams& sp) {
  const HavAction d = column_disclosure(column);
  Role set[2];
  int n = 0;
  relevant_set(subject, d, set, n);

  const VehicleState& me = scene.by_role(subject);
  double t_min = kInf;
  for (int i = 0; i < n; ++i) {
    const VehicleState& other = scene.by_role(set[i]);
    const double t = ttc(me.x, other.x, me.v, other.v);
    if (t < t_min) t_min = t;
  }
  if (std::isinf(t_min)) return 1.0;
  return std::exp(-1.0 / (t_min + sp.epsilon));
}

double efficiency_payoff(const Scene& scene, Role subject, int column) {
  const Role lead_role = reference_lead(subject, column_disclosure(column));
  const VehicleState& me = scene.by_role(subject);
  const VehicleState& lead = scene.by_role(lead_role);
  return lead.v - me.v + lead.a * (lead.x - me.x);
}

Scene project_scene(const Scene& scene, HvAction hv_action,
                    const HvKinematics& kin, double dt) {
  Scene out = scene;
  const VehicleState* in[] = {&scene.hav, &scene.hv, &scene.lv, &scene.tlv};
  VehicleState* proj[] = {&out.hav, &out.hv, &out.lv, &out.tlv};
  for (int i = 0; i < 4; ++i) {
    const double a =
        in[i]->role == Role::Follower ? kin.accel_for(hv_action) : in[i]->a;
    const KinematicStep s = step_kinematics(in[i]->x, in[i]->v, a, dt);
    proj[i]->x = s.x;
    proj[i]->v = s.v;
    proj[i]->a = a;
  }
  return out;
}

StageGame build_stage_game(const Scene& scene, ScenarioKind kind, double tau,
                           const Weights& weights, const HvKinematics& kin,
                           double dt, const SafetyParams& sp) {
  StageGame game;
  game.kind = kind;
  game.tau = tau;
  game.weights = weights;

  const double mlc_gate = kind == ScenarioKind::MLC ? 0.0 : 1.0;
  for (int j = 0; j < kNumActions; ++j) {
    const Scene next = project_scene(scene, static_cast<HvAction>(j), kin, dt);
    for (HavAction d : {HavAction::LaneChange, HavAction::Yield}) {
      const int coop = column_index(DriverType::Cooperative, d);
      const int non = column_index(DriverType::NonCooperative, d);

      const double s_a = safety_payoff(next, Role::Changer, coop, sp);
      const double e_a = efficiency_payoff(next, Role::Changer, coop);
      const double u_a = weights.w_s * s_a + weights.w_e * e_a * mlc_gate;
      game.u_hav[coop][j] = u_a;
      game.u_hav[non][j] = u_a;

      const double s_h = safety_payoff(next, Role::Follower, coop, sp);
      const double e_h = efficiency_payoff(next, Role::Follower, coop);
      const double base = weights.w_s * s_h + weights.w_e * e_h;
      game.u_hv[coop][j] = tau * (base + weights.w_a * u_a);
      game.u_hv[non][j] = (1.0 - tau) * base;
    }
  }
  return game;
}

HvAction best_response(const StageGame& game, int column) {
  int best = 0;
  for (int j = 1; j < kNumActions; ++j)
    if (game.u_hv[column][j] > game.u_hv[column][best]) best = j;
  return static_cast<HvAction>(best);
}

Equilibrium solve_pbe(const StageGame& game) {
  Equilibrium eq;
  for (int col = 0; col < kNumColumns; ++col) {
    eq.hv_response[col] = best_response(game, col);
    eq.hv_payoff_at_response[col] =
        game.u_hv[col][static_cast<int>(eq.hv_response[col])];
  }

  double best_value = -kInf;
  for (HavAction d : {HavAction::LaneChange, HavAction::Yield}) {
    const int coop = column_index(DriverType::Cooperative, d);
    const int non = column_index(DriverType::NonCooperative, d);
    const double value =
        game.tau * game.u_hav[coop][static_cast<int>(eq.hv_response[coop])] +
        (1.0 - game.tau) *
            game.u_hav[non][static_cast<int>(eq.hv_response[non])];
    if (value > best_value) {
      best_value = value;
      eq.hav_choice = d;
    }
  }
  eq.expected_hav_payoff = best_value;
  return eq;
}

Equilibrium brute_force_equilibrium(const StageGame& game) {
  // First response profile, in action-index lexicographic order, whose every
  // entry attains its column maximum; then the first disclosure attaining the
  // best type-weighted changer payoff against it.
  int profile[kNumColumns] = {0, 0, 0, 0};
  bool found = false;
  for (int r0 = 0; r0 < kNumActions && !found; ++r0)
    for (int r1 = 0; r1 < kNumActions && !found; ++r1)
      for (int r2 = 0; r2 < kNumActions && !found; ++r2)
        for (int r3 = 0; r3 < kNumActions && !found; ++r3) {
          const int cand[kNumColumns] = {r0, r1, r2, r3};
          bool rational = true;
          for (int col = 0; col < kNumColumns && rational; ++col)
            for (int j = 0; j < kNumActions; ++j)
              if (game.u_hv[col][j] > game.u_hv[col][cand[col]]) {
                rational = false;
                break;
              }
          if (rational) {
            for (int col = 0; col < kNumColumns; ++col) profile[col] = cand[col];
            found = true;
          }
        }

  Equilibrium eq;
  for (int col = 0; col < kNumColumns; ++col) {
    eq.hv_response[col] = static_cast<HvAction>(profile[col]);
    eq.hv_payoff_at_response[col] = game.u_hv[col][profile[col]];
  }
  double best_value = -kInf;
  for (HavAction d : {HavAction::LaneChange, HavAction::Yield}) {
    const int coop = column_index(DriverType::Cooperative, d);
    const int non = column_index(DriverType::NonCooperative, d);
    const double value = game.tau * game.u_hav[coop][profile[coop]] +
                         (1.0 - game.tau) * game.u_hav[non][profile[non]];
    if (value > best_value) {
      best_value = value;
      eq.hav_choice = d;
    }
  }
  eq.expected_hav_payoff = best_value;
  return eq;
}

}  // namespace negosim
