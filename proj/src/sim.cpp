#include "negosim/sim.hpp"

#include "negosim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace negosim {

std::array<double, kNumActions> response_distribution(const StageGame& game,
                                                      int column,
                                                      double lambda) {
  std::array<double, kNumActions> p{};
  if (std::isinf(lambda)) {
    p[static_cast<int>(best_response(game, column))] = 1.0;
    return p;
  }
  if (!(lambda >= 0.0))
    throw std::invalid_argument("response_distribution: lambda must be >= 0");
  double max_u = game.u_hv[column][0];
  for (int j = 1; j < kNumActions; ++j)
    max_u = std::max(max_u, game.u_hv[column][j]);
  double total = 0.0;
  for (int j = 0; j < kNumActions; ++j) {
    p[j] = std::exp(lambda * (game.u_hv[column][j] - max_u));
    total += p[j];
  }
  for (int j = 0; j < kNumActions; ++j) p[j] /= total;
  return p;
}

HvAction hv_respond(const HvDriverModel& model, const StageGame& game,
                    HavAction disclosed, std::mt19937_64& rng) {
  const int column = column_index(model.type, disclosed);
  if (std::isinf(model.lambda)) return best_response(game, column);
  const auto p = response_distribution(game, column, model.lambda);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (int j = 0; j < kNumActions; ++j) {
    acc += p[j];
    if (u < acc) return static_cast<HvAction>(j);
  }
  return static_cast<HvAction>(kNumActions - 1);
}

namespace {

struct ManeuverState {
  bool committed = false;
  double progress = 0.0;
};

bool gate_passes(const Scene& scene, const SimParams& params,
                 double vehicle_length) {
  const double t_tlv = ttc(scene.hav.x, scene.tlv.x, scene.hav.v, scene.tlv.v);
  const double t_hv = ttc(scene.hv.x, scene.hav.x, scene.hv.v, scene.hav.v);
  if (!(t_tlv > params.gate_min_ttc)) return false;
  if (!(t_hv > params.gate_min_ttc)) return false;
  if (std::abs(scene.tlv.x - scene.hav.x) <= vehicle_length) return false;
  if (std::abs(scene.hv.x - scene.hav.x) <= vehicle_length) return false;
  return true;
}

double changer_accel(const Scene& scene, const ManeuverState& mv,
                     HavAction intended, const SimParams& params,
                     const ScenarioConfig& cfg, double desired_speed) {
  if (mv.committed) {
    // Align with the target-lane slot: follow whoever is directly ahead there.
    const VehicleState* lead = &scene.tlv;
    if (scene.hv.x > scene.hav.x && scene.hv.x < scene.tlv.x)
      lead = &scene.hv;
    return car_following_accel(scene.hav, lead, desired_speed, cfg.accel_min,
                               cfg.accel_max);
  }
  const double follow_lv = car_following_accel(
      scene.hav, &scene.lv, desired_speed, cfg.accel_min, cfg.accel_max);
  if (intended == HavAction::Yield)
    return std::max(cfg.accel_min, std::min(params.yield_accel, follow_lv));
  return follow_lv;
}

bool overlapping(double xa, double xb, double vehicle_length) {
  return std::abs(xa - xb) < vehicle_length;
}

bool collision_check(const Scene& scene, const ManeuverState& mv,
                     double vehicle_length) {
  const bool in_current = !mv.committed ? scene.hav.lane == Lane::Current
                                        : mv.progress < 1.0;
  const bool in_target = scene.hav.lane == Lane::Target ||
                         (mv.committed && mv.progress > 0.0);
  if (in_target && overlapping(scene.hav.x, scene.hv.x, vehicle_length))
    return true;
  if (in_target && overlapping(scene.hav.x, scene.tlv.x, vehicle_length))
    return true;
  if (in_current && overlapping(scene.hav.x, scene.lv.x, vehicle_length))
    return true;
  if (overlapping(scene.hv.x, scene.tlv.x, vehicle_length)) return true;
  return false;
}

}  // namespace

EpisodeResult run_episode(const ScenarioConfig& cfg, const Weights& weights,
                          const SimParams& params, const HvDriverModel& model,
                          uint64_t seed) {
  validate(cfg);

  EpisodeResult result;
  Scene scene = cfg.initial;
  TrustBelief belief =
      make_belief(params.tau0, params.table, params.update_counts);
  DisclosureState disc;
  ManeuverState mv;
  std::mt19937_64 rng(seed);

  const double v0_hav = scene.hav.v;
  const double v0_lv = scene.lv.v;
  const double v0_tlv = scene.tlv.v;

  result.tau_min = belief.tau;

  // Deception event under construction; closed on exit, commit, or episode end.
  bool event_open = false;
  DeceptionEvent event;

  auto close_event = [&](int end_step, bool success, bool protective) {
    if (!event_open) return;
    event.end_step = end_step;
    event.success = success;
    event.protective = protective;
    result.deceptions.push_back(event);
    event_open = false;
  };

  for (int t = 0; t < cfg.horizon; ++t) {
    const StageGame game = build_stage_game(scene, cfg.kind, belief.tau,
                                            weights, params.hv_kin, cfg.dt,
                                            params.safety);
    const Equilibrium eq = solve_pbe(game);

    if (mv.committed) {
      // The maneuver is under way and visible; the signal stays truthful.
      disc.intended = HavAction::LaneChange;
      disc.disclosed = HavAction::LaneChange;
      disc.deception_active = false;
    } else {
      const bool was_active = disc.deception_active;
      choose_disclosure(eq, eq, belief, params.disclosure, disc);
      if (!was_active && disc.deception_active) {
        event_open = true;
        event = {};
        event.start_step = t;
        event.intended = disc.intended;
      } else if (was_active && !disc.deception_active) {
        const bool protective = disc.locked_out;
        if (protective) result.protective_termination = true;
        close_event(t, false, protective);
      }
    }

    const HvAction hv_action = hv_respond(model, game, disc.disclosed, rng);

    const double hv_cmd = params.hv_kin.accel_for(hv_action);
    update_trust(belief, t, classify_action(hv_cmd, params.action_threshold),
                 hv_cmd);
    result.tau_min = std::min(result.tau_min, belief.tau);

    // Commitment: the changer starts moving once it means to change lanes and
    // both target-lane clearances pass.
    if (!mv.committed && disc.intended == HavAction::LaneChange &&
        gate_passes(scene, params, cfg.vehicle_length)) {
      mv.committed = true;
      mv.progress = 0.0;
      if (result.commit_step < 0) result.commit_step = t;
      if (disc.deception_active) {
        close_event(t + 1, true, false);
        disc.deception_active = false;
        disc.disclosed = disc.intended;
      }
    }

    const double a_hav =
        changer_accel(scene, mv, disc.intended, params, cfg, v0_hav);
    const double a_lv = surrounding_accel(cfg.surrounding, scene.lv, nullptr,
                                          v0_lv, cfg.accel_min, cfg.accel_max);
    const double a_tlv = surrounding_accel(cfg.surrounding, scene.tlv, nullptr,
                                           v0_tlv, cfg.accel_min, cfg.accel_max);

    TraceRow row;
    row.t = t;
    row.scene = scene;
    row.scene.hav.a = a_hav;
    row.scene.hv.a = hv_cmd;
    row.scene.lv.a = a_lv;
    row.scene.tlv.a = a_tlv;
    row.tau = game.tau;
    row.intended = disc.intended;
    row.disclosed = disc.disclosed;
    row.deception_active = disc.deception_active;
    row.hv_action = hv_action;
    const int col = column_index(likely_type(belief), disc.disclosed);
    row.u_hav = game.u_hav[col][static_cast<int>(hv_action)];
    row.u_hv = game.u_hv[col][static_cast<int>(hv_action)];
    row.committed = mv.committed;
    row.lateral_progress = mv.progress;
    result.trace.push_back(row);

    // Motion.
    auto advance = [&](VehicleState& s, double a) {
      const KinematicStep k = step_kinematics(s.x, s.v, a, cfg.dt);
      s.x = k.x;
      s.v = k.v;
      s.a = a;
    };
    advance(scene.hav, a_hav);
    advance(scene.hv, hv_cmd);
    advance(scene.lv, a_lv);
    advance(scene.tlv, a_tlv);

    bool completed_now = false;
    if (mv.committed) {
      mv.progress += cfg.dt / cfg.lateral_duration;
      if (mv.progress >= 1.0 - 1e-12) {
        mv.progress = 1.0;
        completed_now = true;
      }
      scene.hav.lane = mv.progress >= 0.5 ? Lane::Target : Lane::Current;
      scene.hav.lateral_progress = mv.progress;

      // A maneuver that has not yet crossed the boundary is abandoned when
      // the physical slot closes.
      if (!completed_now && mv.progress <= 0.5 &&
          (overlapping(scene.hav.x, scene.hv.x, cfg.vehicle_length) ||
           overlapping(scene.hav.x, scene.tlv.x, cfg.vehicle_length))) {
        mv.committed = false;
        mv.progress = 0.0;
        scene.hav.lane = Lane::Current;
        scene.hav.lateral_progress = 0.0;
        result.aborted = true;
      }
    }

    if (collision_check(scene, mv, cfg.vehicle_length)) {
      result.collision = true;
      result.termination = Termination::Collision;
      close_event(t + 1, false, false);
      break;
    }
    if (completed_now) {
      result.completed = true;
      result.termination = Termination::Completed;
      result.completion_time = (t + 1) * cfg.dt;
      close_event(t + 1, false, false);
      break;
    }
  }

  close_event(static_cast<int>(result.trace.size()), false, false);

  result.lane_change_time = lane_change_time(result, cfg.dt);
  result.min_tdtc = min_tdtc(result, cfg.dt, cfg.lateral_duration);
  result.tau_final = belief.tau;
  return result;
}

double lane_change_time(const EpisodeResult& result, double dt) {
  if (!result.completed || result.trace.empty()) return kInf;
  const double first_disclosure = result.trace.front().t * dt;
  return result.completion_time - first_disclosure;
}

double min_tdtc(const EpisodeResult& result, double dt,
                double lateral_duration) {
  (void)dt;
  double best = kInf;
  for (const TraceRow& row : result.trace) {
    if (!row.committed) continue;
    const double t_hav = (1.0 - row.lateral_progress) * lateral_duration;
    const double x_cp = row.scene.hav.x + row.scene.hav.v * t_hav;
    if (!(row.scene.hv.v > 0.0) || x_cp < row.scene.hv.x) continue;  // no meet
    const double t_hv = (x_cp - row.scene.hv.x) / row.scene.hv.v;
    best = std::min(best, std::abs(t_hav - t_hv));
  }
  return best;
}

ScenarioConfig sample_scenario(const SamplerRanges& ranges,
                               std::mt19937_64& rng,
                               const ScenarioConfig& base) {
  ScenarioConfig cfg = base;
  cfg.kind = ranges.kind;

  const double hav_v = uniform_range(rng, ranges.hav_v_min, ranges.hav_v_max);
  const double hv_dv = uniform_range(rng, ranges.hv_dv_min, ranges.hv_dv_max);
  const double tlv_dv =
      uniform_range(rng, ranges.tlv_dv_min, ranges.tlv_dv_max);
  const double lv_dv = uniform_range(rng, ranges.lv_dv_min, ranges.lv_dv_max);
  const double hv_gap =
      uniform_range(rng, ranges.hv_gap_min, ranges.hv_gap_max);
  const double tlv_gap =
      uniform_range(rng, ranges.tlv_gap_min, ranges.tlv_gap_max);
  const double lv_gap =
      uniform_range(rng, ranges.lv_gap_min, ranges.lv_gap_max);

  Scene s;
  s.hav = {1, Role::Changer, 0.0, Lane::Current, hav_v, 0.0, 0.0};
  s.hv = {2, Role::Follower, -hv_gap, Lane::Target,
          std::max(0.0, hav_v + hv_dv), 0.0, 0.0};
  s.lv = {3, Role::CurrentLead, lv_gap, Lane::Current,
          std::max(0.0, hav_v + lv_dv), 0.0, 0.0};
  s.tlv = {4, Role::TargetLead, tlv_gap, Lane::Target,
           std::max(0.0, hav_v + tlv_dv), 0.0, 0.0};
  cfg.initial = s;
  return cfg;
}

void sample_pair(const BatchConfig& cfg, int k, ScenarioConfig& scenario,
                 HvDriverModel& model, uint64_t& episode_seed) {
  std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<uint64_t>(k)));
  scenario = sample_scenario(cfg.ranges, rng, cfg.base);
  model.type = uniform01(rng) < cfg.params.tau0 ? DriverType::Cooperative
                                                : DriverType::NonCooperative;
  model.lambda = cfg.hv_lambda;
  episode_seed = rng();
  scenario.rng_seed = episode_seed;
}

EpisodeResult run_pair_arm(const BatchConfig& cfg, int k,
                           DisclosurePolicy policy) {
  ScenarioConfig scenario;
  HvDriverModel model;
  uint64_t episode_seed = 0;
  sample_pair(cfg, k, scenario, model, episode_seed);
  SimParams params = cfg.params;
  params.disclosure.policy = policy;
  return run_episode(scenario, cfg.weights, params, model, episode_seed);
}

namespace {

EpisodeSummary summarize(const EpisodeResult& r) {
  EpisodeSummary s;
  s.completed = r.completed;
  s.collision = r.collision;
  s.lane_change_time = r.lane_change_time;
  s.min_tdtc = r.min_tdtc;
  s.steps = static_cast<int>(r.trace.size());
  s.deception_events = static_cast<int>(r.deceptions.size());
  for (const DeceptionEvent& e : r.deceptions) {
    if (e.intended == HavAction::LaneChange) {
      ++s.deception_events_lc;
      if (e.success) ++s.deception_successes_lc;
    } else {
      ++s.deception_events_yield;
      if (e.success) ++s.deception_successes_yield;
    }
  }
  s.protective_termination = r.protective_termination;
  s.tau_final = r.tau_final;
  return s;
}

PairRecord run_one_pair(const BatchConfig& cfg, int k) {
  PairRecord rec;
  rec.index = k;
  ScenarioConfig scenario;
  HvDriverModel model;
  uint64_t episode_seed = 0;
  sample_pair(cfg, k, scenario, model, episode_seed);
  rec.seed = episode_seed;
  rec.hv_type = model.type;

  SimParams honest = cfg.params;
  honest.disclosure.policy = DisclosurePolicy::Honest;
  rec.honest =
      summarize(run_episode(scenario, cfg.weights, honest, model, episode_seed));

  SimParams deceptive = cfg.params;
  deceptive.disclosure.policy = DisclosurePolicy::Deceptive;
  rec.deceptive = summarize(
      run_episode(scenario, cfg.weights, deceptive, model, episode_seed));
  return rec;
}

}  // namespace

Quantiles quantiles(std::vector<double> values) {
  Quantiles q;
  q.n = static_cast<int>(values.size());
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  q.mean = sum / q.n;
  auto at = [&](double p) {
    const double idx = p * (q.n - 1);
    const int lo = static_cast<int>(idx);
    const int hi = std::min(lo + 1, q.n - 1);
    const double frac = idx - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  q.p10 = at(0.10);
  q.p25 = at(0.25);
  q.p50 = at(0.50);
  q.p75 = at(0.75);
  q.p90 = at(0.90);
  return q;
}

BatchStats aggregate(const std::vector<PairRecord>& pairs) {
  BatchStats st;
  st.n_pairs = static_cast<int>(pairs.size());
  std::vector<double> lct_h, lct_d, tdtc_h, tdtc_d;
  for (const PairRecord& p : pairs) {
    if (p.honest.completed) lct_h.push_back(p.honest.lane_change_time);
    if (p.deceptive.completed) lct_d.push_back(p.deceptive.lane_change_time);
    if (std::isfinite(p.honest.min_tdtc)) tdtc_h.push_back(p.honest.min_tdtc);
    if (std::isfinite(p.deceptive.min_tdtc))
      tdtc_d.push_back(p.deceptive.min_tdtc);

    st.deception_events_lc += p.deceptive.deception_events_lc;
    st.deception_successes_lc += p.deceptive.deception_successes_lc;
    st.deception_events_yield += p.deceptive.deception_events_yield;
    st.deception_successes_yield += p.deceptive.deception_successes_yield;
    if (p.deceptive.protective_termination) ++st.protective_terminations;

    if (!p.honest.completed || !p.deceptive.completed) continue;
    ++st.n_valid;
    if (p.deceptive.lane_change_time < p.honest.lane_change_time)
      ++st.lct_reduced;
    else if (p.deceptive.lane_change_time == p.honest.lane_change_time)
      ++st.lct_ties;
    if (p.deceptive.min_tdtc > p.honest.min_tdtc)
      ++st.tdtc_increased;
    else if (p.deceptive.min_tdtc == p.honest.min_tdtc)
      ++st.tdtc_ties;
  }
  if (st.n_valid > 0) {
    st.frac_lct_reduced = static_cast<double>(st.lct_reduced) / st.n_valid;
    st.frac_tdtc_increased =
        static_cast<double>(st.tdtc_increased) / st.n_valid;
    st.lct_win_rate_ties_half =
        (st.lct_reduced + 0.5 * st.lct_ties) / st.n_valid;
  }
  if (st.deception_events_lc > 0)
    st.success_rate_lc_intended =
        static_cast<double>(st.deception_successes_lc) / st.deception_events_lc;
  if (st.deception_events_yield > 0)
    st.success_rate_yield_intended =
        static_cast<double>(st.deception_successes_yield) /
        st.deception_events_yield;
  if (st.n_pairs > 0)
    st.trust_collapse_fraction =
        static_cast<double>(st.protective_terminations) / st.n_pairs;
  st.lct_honest = quantiles(lct_h);
  st.lct_deceptive = quantiles(lct_d);
  st.tdtc_honest = quantiles(tdtc_h);
  st.tdtc_deceptive = quantiles(tdtc_d);
  return st;
}

BatchResult run_batch_serial(const BatchConfig& cfg) {
  BatchResult result;
  result.pairs.resize(cfg.n_pairs);
  for (int k = 0; k < cfg.n_pairs; ++k) result.pairs[k] = run_one_pair(cfg, k);
  result.stats = aggregate(result.pairs);
  return result;
}

BatchResult run_batch_parallel(const BatchConfig& cfg, int jobs) {
  BatchResult result;
  result.pairs.resize(cfg.n_pairs);
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int k = 0; k < cfg.n_pairs; ++k) result.pairs[k] = run_one_pair(cfg, k);
#else
  (void)jobs;
  for (int k = 0; k < cfg.n_pairs; ++k) result.pairs[k] = run_one_pair(cfg, k);
#endif
  result.stats = aggregate(result.pairs);
  return result;
}

BatchResult run_batch(const BatchConfig& cfg, int jobs) {
  if (jobs == 1) return run_batch_serial(cfg);
  return run_batch_parallel(cfg, jobs);
}

}  // namespace negosim
