#pragma once

#include "negosim/disclosure.hpp"
#include "negosim/game.hpp"
#include "negosim/scenario.hpp"
#include "negosim/trust.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace negosim {

struct HvDriverModel {
  DriverType type = DriverType::Cooperative;
  // Choice sharpness. 0 = uniform, infinity = strict best response.
  double lambda = 3.0;
};

// Response probabilities over the follower actions for one payoff column.
std::array<double, kNumActions> response_distribution(const StageGame& game,
                                                      int column,
                                                      double lambda);

HvAction hv_respond(const HvDriverModel& model, const StageGame& game,
                    HavAction disclosed, std::mt19937_64& rng);

struct SimParams {
  HvKinematics hv_kin;
  SafetyParams safety;
  DisclosureConfig disclosure;
  double tau0 = 0.5;
  LikelihoodTable table = LikelihoodTable::defaults();
  bool update_counts = true;
  double gate_min_ttc = 2.0;     // s, both target-lane clearances
  double yield_accel = -0.5;     // m/s^2 while the changer waits
  double action_threshold = 1.0; // m/s^2, observation classifier
};

struct TraceRow {
  int t = 0;
  Scene scene;           // state at step start; `a` fields hold the commands applied this step
  double tau = 0.0;      // belief used for this step's game
  HavAction intended = HavAction::Yield;
  HavAction disclosed = HavAction::Yield;
  bool deception_active = false;
  HvAction hv_action = HvAction::Maintain;
  double u_hav = 0.0;    // payoffs in the realized (likely type, disclosed) column
  double u_hv = 0.0;
  bool committed = false;        // lateral maneuver in progress at step start
  double lateral_progress = 0.0; // at step start
};

struct DeceptionEvent {
  int start_step = 0;
  int end_step = 0;             // step at which the deception stopped showing
  HavAction intended = HavAction::Yield;  // direction at entry
  bool success = false;         // maneuver committed while the deception held
  bool protective = false;      // ended by the trust protection rule
};

enum class Termination { Completed, Collision, Horizon };

struct EpisodeResult {
  std::vector<TraceRow> trace;
  Termination termination = Termination::Horizon;
  bool completed = false;
  bool collision = false;
  bool aborted = false;          // some maneuver was abandoned before half way
  int commit_step = -1;          // first commit; -1 if never
  double completion_time = kInf; // s, end of the step where progress reached 1
  double lane_change_time = kInf;
  double min_tdtc = kInf;
  std::vector<DeceptionEvent> deceptions;
  bool protective_termination = false;
  double tau_final = 0.0;
  double tau_min = 1.0;
};

EpisodeResult run_episode(const ScenarioConfig& cfg, const Weights& weights,
                          const SimParams& params, const HvDriverModel& model,
                          uint64_t seed);

// First signal shown to completion of the lateral ramp; +inf when the episode
// never completed.
double lane_change_time(const EpisodeResult& result, double dt);

// Smallest gap, over the committed maneuver, between the two parties' arrival
// times at the merge abscissa, both projected at constant current speed.
double min_tdtc(const EpisodeResult& result, double dt,
                double lateral_duration);

// Uniform scene draws for Monte Carlo batches. Gaps are center distances in
// meters (follower behind the changer, leads ahead); speeds are absolute for
// the changer and offsets for everyone else.
struct SamplerRanges {
  ScenarioKind kind = ScenarioKind::DLC;
  double hav_v_min = 9.0, hav_v_max = 13.0;
  double hv_dv_min = 2.0, hv_dv_max = 4.0;    // follower speed - changer speed
  double tlv_dv_min = 0.5, tlv_dv_max = 1.5;  // target lead - changer speed
  double lv_dv_min = -0.5, lv_dv_max = 0.5;   // current lead - changer speed
  double hv_gap_min = 12.0, hv_gap_max = 20.0;
  double tlv_gap_min = 25.0, tlv_gap_max = 45.0;
  double lv_gap_min = 30.0, lv_gap_max = 50.0;
};

ScenarioConfig sample_scenario(const SamplerRanges& ranges,
                               std::mt19937_64& rng,
                               const ScenarioConfig& base = {});

struct BatchConfig {
  SamplerRanges ranges;
  ScenarioConfig base;           // dt, horizon, bounds shared by all draws
  Weights weights;
  SimParams params;              // policy field ignored; both arms run
  double hv_lambda = 3.0;
  int n_pairs = 100;
  uint64_t seed = 0;
};

struct EpisodeSummary {
  bool completed = false;
  bool collision = false;
  double lane_change_time = kInf;
  double min_tdtc = kInf;
  int steps = 0;
  int deception_events = 0;
  int deception_successes_lc = 0;     // entered intending LaneChange
  int deception_successes_yield = 0;  // entered intending Yield
  int deception_events_lc = 0;
  int deception_events_yield = 0;
  bool protective_termination = false;
  double tau_final = 0.0;
};

struct PairRecord {
  int index = 0;
  uint64_t seed = 0;
  DriverType hv_type = DriverType::Cooperative;
  EpisodeSummary honest;
  EpisodeSummary deceptive;
};

struct Quantiles {
  double mean = 0.0;
  double p10 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p90 = 0.0;
  int n = 0;
};
Quantiles quantiles(std::vector<double> values);

struct BatchStats {
  int n_pairs = 0;
  int n_valid = 0;               // both arms completed
  int lct_reduced = 0;           // strictly faster under deception
  int lct_ties = 0;
  int tdtc_increased = 0;        // strictly larger minimum under deception
  int tdtc_ties = 0;
  double frac_lct_reduced = 0.0;       // over valid pairs
  double frac_tdtc_increased = 0.0;
  double lct_win_rate_ties_half = 0.0; // ties counted half, over valid pairs
  int deception_events_lc = 0;
  int deception_successes_lc = 0;
  int deception_events_yield = 0;
  int deception_successes_yield = 0;
  double success_rate_lc_intended = 0.0;
  double success_rate_yield_intended = 0.0;
  int protective_terminations = 0;     // deceptive arms with a protective stop
  double trust_collapse_fraction = 0.0;
  Quantiles lct_honest, lct_deceptive;
  Quantiles tdtc_honest, tdtc_deceptive;
};

struct BatchResult {
  std::vector<PairRecord> pairs;
  BatchStats stats;
};

// Deterministic derivation shared by the batch runners and any caller that
// wants to replay a single pair: pair k always gets the same scenario and
// follower model regardless of scheduling.
void sample_pair(const BatchConfig& cfg, int k, ScenarioConfig& scenario,
                 HvDriverModel& model, uint64_t& episode_seed);

EpisodeResult run_pair_arm(const BatchConfig& cfg, int k,
                           DisclosurePolicy policy);

// Reference implementation: plain loop over pairs in index order.
BatchResult run_batch_serial(const BatchConfig& cfg);

// OpenMP over pairs; aggregation folds in index order, so the result is
// identical to the serial reference for any job count.
BatchResult run_batch_parallel(const BatchConfig& cfg, int jobs);

// jobs == 1 runs the serial reference; 0 means all available threads.
BatchResult run_batch(const BatchConfig& cfg, int jobs = 1);

BatchStats aggregate(const std::vector<PairRecord>& pairs);

}  // namespace negosim
