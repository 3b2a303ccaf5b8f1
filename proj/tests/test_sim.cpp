#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "negosim/io.hpp"
#include "negosim/sim.hpp"

#include <cmath>

using namespace negosim;

namespace {

// Clear target lane: slow follower far behind, faster leads far ahead.
ScenarioConfig open_scene() {
  ScenarioConfig cfg;
  cfg.initial.hav = {1, Role::Changer, 0.0, Lane::Current, 12.0, 0.0, 0.0};
  cfg.initial.hv = {2, Role::Follower, -40.0, Lane::Target, 5.0, 0.0, 0.0};
  cfg.initial.lv = {3, Role::CurrentLead, 45.0, Lane::Current, 12.5, 0.0, 0.0};
  cfg.initial.tlv = {4, Role::TargetLead, 40.0, Lane::Target, 14.0, 0.0, 0.0};
  return cfg;
}

bool same_pair(const PairRecord& a, const PairRecord& b) {
  auto same = [](const EpisodeSummary& x, const EpisodeSummary& y) {
    return x.completed == y.completed && x.collision == y.collision &&
           x.lane_change_time == y.lane_change_time &&
           x.min_tdtc == y.min_tdtc && x.steps == y.steps &&
           x.deception_events == y.deception_events &&
           x.deception_successes_lc == y.deception_successes_lc &&
           x.deception_successes_yield == y.deception_successes_yield &&
           x.deception_events_lc == y.deception_events_lc &&
           x.deception_events_yield == y.deception_events_yield &&
           x.protective_termination == y.protective_termination &&
           x.tau_final == y.tau_final;
  };
  return a.index == b.index && a.seed == b.seed && a.hv_type == b.hv_type &&
         same(a.honest, b.honest) && same(a.deceptive, b.deceptive);
}

}  // namespace

TEST_CASE("softmax response distribution") {
  StageGame g;
  g.u_hv[0] = {0.0, -1.0, -1.0};

  auto uniform = response_distribution(g, 0, 0.0);
  for (double p : uniform) CHECK(p == doctest::Approx(1.0 / 3.0));

  auto sharp = response_distribution(g, 0, 5.0);
  CHECK(sharp[0] ==
        doctest::Approx(1.0 / (1.0 + 2.0 * std::exp(-5.0))).epsilon(1e-12));
  CHECK(sharp[0] == doctest::Approx(0.9867).epsilon(1e-4));
  CHECK(sharp[0] + sharp[1] + sharp[2] == doctest::Approx(1.0).epsilon(1e-12));

  g.u_hv[1] = {0.0, 3.0, 1.0};
  auto strict = response_distribution(g, 1, kInf);
  CHECK(strict[1] == 1.0);
  CHECK(strict[0] == 0.0);

  // Shift invariance: probabilities depend on payoff gaps only.
  g.u_hv[2] = {100.0, 99.0, 99.0};
  auto shifted = response_distribution(g, 2, 5.0);
  CHECK(shifted[0] == doctest::Approx(sharp[0]).epsilon(1e-14));

  CHECK_THROWS_AS(response_distribution(g, 0, -1.0), std::invalid_argument);
}

TEST_CASE("strict responders do not consume randomness") {
  StageGame g;
  g.u_hv[column_index(DriverType::Cooperative, HavAction::LaneChange)] = {
      0.0, 1.0, 2.0};
  HvDriverModel model{DriverType::Cooperative, kInf};
  std::mt19937_64 used(42), untouched(42);
  const HvAction a = hv_respond(model, g, HavAction::LaneChange, used);
  CHECK(a == HvAction::Decelerate);
  CHECK(used() == untouched());
}

TEST_CASE("open target lane: immediate commit, ramp-length episode") {
  ScenarioConfig cfg = open_scene();
  SimParams params;  // honest by default
  params.tau0 = 0.8;
  const Weights w{0.0, 1.0, 0.0};
  const EpisodeResult r =
      run_episode(cfg, w, params, {DriverType::Cooperative, 3.0}, 7);

  CHECK(r.completed);
  CHECK(r.termination == Termination::Completed);
  CHECK(r.commit_step == 0);
  CHECK(r.trace.size() == 15);  // 3 s ramp at dt 0.2
  CHECK(r.completion_time == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.lane_change_time == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_FALSE(r.collision);
  CHECK(r.trace.front().committed);
  CHECK(r.trace.front().intended == HavAction::LaneChange);
  CHECK(r.trace.front().disclosed == HavAction::LaneChange);
  CHECK(r.trace.back().lateral_progress ==
        doctest::Approx(14.0 * 0.2 / 3.0).epsilon(1e-12));
}

TEST_CASE("a follower that cannot slow down causes a collision") {
  ScenarioConfig cfg = open_scene();
  // 11 m back, closing 2.5 m/s: overlap arrives past the half-way point of
  // the ramp, where the changer can no longer bail back to its old lane.
  cfg.initial.hv = {2, Role::Follower, -11.0, Lane::Target, 14.5, 0.0, 0.0};
  SimParams params;
  params.hv_kin = {0.0, 0.0, 0.0};  // actions have no kinematic effect
  const Weights w{1.0, 0.0, 0.0};   // faster target lane: change immediately
  const EpisodeResult r =
      run_episode(cfg, w, params, {DriverType::Cooperative, 3.0}, 7);
  CHECK(r.commit_step == 0);  // gate: 11 m at 2.5 m/s closing is 4.4 s
  CHECK(r.collision);
  CHECK(r.termination == Termination::Collision);
  CHECK_FALSE(r.completed);
  CHECK(std::isinf(r.lane_change_time));
}

TEST_CASE("slot closing early aborts the maneuver, then it recovers") {
  ScenarioConfig cfg = open_scene();
  cfg.initial.hv = {2, Role::Follower, -6.5, Lane::Target, 14.9, 0.0, 0.0};
  SimParams params;
  params.hv_kin = {0.0, 0.0, 0.0};
  const Weights w{1.0, 0.0, 0.0};
  const EpisodeResult r =
      run_episode(cfg, w, params, {DriverType::Cooperative, 3.0}, 7);
  CHECK(r.commit_step == 0);
  CHECK(r.aborted);            // follower overlapped before the lane boundary
  CHECK(r.completed);          // second attempt after it passes
  CHECK_FALSE(r.collision);
  CHECK(r.lane_change_time > 3.0);
}

TEST_CASE("episode runs are deterministic in the seed") {
  ScenarioConfig cfg = open_scene();
  cfg.initial.hv = {2, Role::Follower, -14.0, Lane::Target, 15.0, 0.0, 0.0};
  SimParams params;
  params.tau0 = 0.8;
  params.disclosure.policy = DisclosurePolicy::Deceptive;
  const Weights w{0.05, 10.0, 5.0};
  const HvDriverModel model{DriverType::Cooperative, 3.0};
  const EpisodeResult a = run_episode(cfg, w, params, model, 1234);
  const EpisodeResult b = run_episode(cfg, w, params, model, 1234);
  CHECK(episode_trace_csv(a, cfg.dt) == episode_trace_csv(b, cfg.dt));
  const EpisodeResult c = run_episode(cfg, w, params, model, 1235);
  CHECK(episode_trace_csv(a, cfg.dt) != episode_trace_csv(c, cfg.dt));
}

TEST_CASE("lane change time runs from first signal to ramp completion") {
  EpisodeResult r;
  r.completed = true;
  r.completion_time = 5.0;
  TraceRow row;
  row.t = 4;
  r.trace.push_back(row);
  CHECK(lane_change_time(r, 0.2) == doctest::Approx(4.2).epsilon(1e-12));

  EpisodeResult unfinished;
  unfinished.trace.push_back(row);
  CHECK(std::isinf(lane_change_time(unfinished, 0.2)));
}

TEST_CASE("arrival-time gap at the merge point, worked example") {
  EpisodeResult r;
  TraceRow row;
  row.committed = true;
  row.lateral_progress = 1.0 / 3.0;  // 2 s of ramp left out of 3
  row.scene.hav = {1, Role::Changer, 0.0, Lane::Current, 10.0, 0.0, 0.0};
  row.scene.hv = {2, Role::Follower, -30.0, Lane::Target, 10.0, 0.0, 0.0};
  r.trace.push_back(row);
  // Merge point 20 m ahead; follower needs 5 s, changer 2 s.
  CHECK(min_tdtc(r, 0.2, 3.0) == doctest::Approx(3.0).epsilon(1e-12));

  // Stopped follower never arrives: skipped.
  r.trace[0].scene.hv.v = 0.0;
  CHECK(std::isinf(min_tdtc(r, 0.2, 3.0)));

  // Follower already past the merge point: skipped.
  r.trace[0].scene.hv.v = 10.0;
  r.trace[0].scene.hv.x = 25.0;
  CHECK(std::isinf(min_tdtc(r, 0.2, 3.0)));

  // Uncommitted rows do not count.
  r.trace[0].scene.hv.x = -30.0;
  r.trace[0].committed = false;
  CHECK(std::isinf(min_tdtc(r, 0.2, 3.0)));
}

TEST_CASE("scene sampler stays inside its ranges") {
  SamplerRanges ranges;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const ScenarioConfig cfg = sample_scenario(ranges, rng);
    CHECK_NOTHROW(validate(cfg));
    const Scene& s = cfg.initial;
    CHECK(s.hav.v >= ranges.hav_v_min);
    CHECK(s.hav.v <= ranges.hav_v_max);
    CHECK(-s.hv.x >= ranges.hv_gap_min);
    CHECK(-s.hv.x <= ranges.hv_gap_max);
    CHECK(s.hv.v - s.hav.v >= ranges.hv_dv_min);
    CHECK(s.hv.v - s.hav.v <= ranges.hv_dv_max);
    CHECK(s.tlv.x >= ranges.tlv_gap_min);
    CHECK(s.tlv.x <= ranges.tlv_gap_max);
    CHECK(s.lv.x >= ranges.lv_gap_min);
    CHECK(s.lv.x <= ranges.lv_gap_max);
    CHECK(s.hv.lane == Lane::Target);
    CHECK(s.tlv.lane == Lane::Target);
    CHECK(s.lv.lane == Lane::Current);
  }
}

TEST_CASE("pair sampling is deterministic and respects the type prior") {
  BatchConfig cfg;
  cfg.seed = 77;
  cfg.params.tau0 = 0.8;

  ScenarioConfig s1, s2;
  HvDriverModel m1, m2;
  uint64_t e1 = 0, e2 = 0;
  sample_pair(cfg, 3, s1, m1, e1);
  sample_pair(cfg, 3, s2, m2, e2);
  CHECK(e1 == e2);
  CHECK(s1.initial.hav.v == s2.initial.hav.v);
  CHECK(m1.type == m2.type);

  sample_pair(cfg, 4, s2, m2, e2);
  CHECK(e1 != e2);

  int coop = 0;
  const int n = 500;
  for (int k = 0; k < n; ++k) {
    sample_pair(cfg, k, s1, m1, e1);
    CHECK(m1.lambda == cfg.hv_lambda);
    if (m1.type == DriverType::Cooperative) ++coop;
  }
  CHECK(coop > n * 0.72);
  CHECK(coop < n * 0.88);
}

TEST_CASE("parallel batch equals the serial reference") {
  BatchConfig cfg;
  cfg.seed = 99;
  cfg.n_pairs = 40;
  cfg.weights = {0.05, 10.0, 5.0};
  cfg.params.tau0 = 0.8;
  cfg.hv_lambda = 3.0;

  const BatchResult serial = run_batch_serial(cfg);
  const BatchResult parallel = run_batch_parallel(cfg, 3);
  const BatchResult all_threads = run_batch(cfg, 0);

  REQUIRE(serial.pairs.size() == parallel.pairs.size());
  REQUIRE(serial.pairs.size() == all_threads.pairs.size());
  for (size_t i = 0; i < serial.pairs.size(); ++i) {
    CHECK(same_pair(serial.pairs[i], parallel.pairs[i]));
    CHECK(same_pair(serial.pairs[i], all_threads.pairs[i]));
  }
  CHECK(batch_stats_json(serial.stats) == batch_stats_json(parallel.stats));
  CHECK(batch_stats_json(serial.stats) == batch_stats_json(all_threads.stats));
}

TEST_CASE("aggregation counts strict improvements over valid pairs") {
  PairRecord p0;
  p0.honest.completed = true;
  p0.honest.lane_change_time = 10.0;
  p0.honest.min_tdtc = 2.0;
  p0.deceptive.completed = true;
  p0.deceptive.lane_change_time = 8.0;
  p0.deceptive.min_tdtc = 3.0;
  p0.deceptive.deception_events_yield = 2;
  p0.deceptive.deception_successes_yield = 1;

  PairRecord p1;
  p1.honest.completed = true;
  p1.honest.lane_change_time = 5.0;
  p1.honest.min_tdtc = 1.0;
  p1.deceptive.completed = true;
  p1.deceptive.lane_change_time = 5.0;
  p1.deceptive.min_tdtc = 1.0;
  p1.deceptive.protective_termination = true;

  PairRecord p2;  // honest arm never completed: not a valid pair
  p2.honest.completed = false;
  p2.honest.lane_change_time = kInf;
  p2.honest.min_tdtc = kInf;
  p2.deceptive.completed = true;
  p2.deceptive.lane_change_time = 4.0;
  p2.deceptive.min_tdtc = 0.5;

  const BatchStats st = aggregate({p0, p1, p2});
  CHECK(st.n_pairs == 3);
  CHECK(st.n_valid == 2);
  CHECK(st.lct_reduced == 1);
  CHECK(st.lct_ties == 1);
  CHECK(st.frac_lct_reduced == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(st.lct_win_rate_ties_half == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(st.tdtc_increased == 1);
  CHECK(st.tdtc_ties == 1);
  CHECK(st.frac_tdtc_increased == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(st.deception_events_yield == 2);
  CHECK(st.success_rate_yield_intended == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(st.protective_terminations == 1);
  CHECK(st.trust_collapse_fraction == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(st.lct_honest.n == 2);   // p2's honest arm never finished
  CHECK(st.lct_deceptive.n == 3);
  CHECK(st.lct_honest.mean == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("quantiles use linear interpolation") {
  std::vector<double> v = {10, 1, 2, 3, 4, 5, 6, 7, 8, 9};  // unsorted on purpose
  const Quantiles q = quantiles(v);
  CHECK(q.n == 10);
  CHECK(q.mean == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(q.p50 == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(q.p10 == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(q.p90 == doctest::Approx(9.1).epsilon(1e-12));
  CHECK(q.p25 == doctest::Approx(3.25).epsilon(1e-12));

  const Quantiles empty = quantiles({});
  CHECK(empty.n == 0);
  CHECK(empty.mean == 0.0);
}

TEST_CASE("deception bookkeeping stays consistent over a batch") {
  BatchConfig cfg;
  cfg.seed = 2024;
  cfg.n_pairs = 30;
  cfg.weights = {0.05, 10.0, 5.0};
  cfg.params.tau0 = 0.8;
  cfg.hv_lambda = 3.0;

  for (int k = 0; k < cfg.n_pairs; ++k) {
    const EpisodeResult r = run_pair_arm(cfg, k, DisclosurePolicy::Deceptive);
    bool saw_protective = false;
    for (const DeceptionEvent& e : r.deceptions) {
      CHECK(e.start_step < e.end_step);
      CHECK(e.end_step <= static_cast<int>(r.trace.size()));
      // Rows inside the event show the flipped signal; the row at end_step
      // (when present) is back to truthful.
      for (int t = e.start_step; t < e.end_step && t < (int)r.trace.size();
           ++t) {
        const TraceRow& row = r.trace[t];
        if (t < e.end_step - 1 || !e.success) {
          CHECK(row.deception_active);
          CHECK(row.disclosed != row.intended);
        }
      }
      if (e.protective) saw_protective = true;
      // A protective stop bars re-entry: nothing may start afterwards.
      if (e.protective)
        CHECK(&e == &r.deceptions.back());
    }
    CHECK(r.protective_termination == saw_protective);

    // Honest arm never deceives.
    const EpisodeResult h = run_pair_arm(cfg, k, DisclosurePolicy::Honest);
    CHECK(h.deceptions.empty());
    for (const TraceRow& row : h.trace) {
      CHECK_FALSE(row.deception_active);
      CHECK(row.disclosed == row.intended);
    }
  }
}
