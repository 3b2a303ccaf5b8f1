#include "negosim/calibrate.hpp"

#include "negosim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace negosim {

namespace {

struct ReplayFrame {
  Scene scene;
  HavAction intent = HavAction::Yield;
  HvAction observed = HvAction::Maintain;
  double accel = 0.0;
};

struct ReplayEvent {
  int event_id = 0;
  ScenarioKind kind = ScenarioKind::DLC;
  std::vector<ReplayFrame> frames;
};

VehicleState state_from(const TrajectoryRecord& r, Role role, Lane lane) {
  VehicleState s;
  s.id = static_cast<int>(r.vehicle_id);
  s.role = role;
  s.x = r.x;
  s.lane = lane;
  s.v = std::max(0.0, r.v);
  s.a = r.a;
  return s;
}

// Recorded states and observed strategies per decision frame; events whose
// window yields no usable frame are dropped (counted by the caller).
std::vector<ReplayEvent> build_replay_events(
    const std::vector<InteractionEvent>& events, const Dataset& dataset,
    const ExtractionOptions& options, int* skipped) {
  std::vector<ReplayEvent> out;
  for (const InteractionEvent& ev : events) {
    const auto strategies = infer_frame_strategies(ev, dataset, options);
    ReplayEvent re;
    re.event_id = ev.event_id;
    re.kind = ev.kind;
    for (const FrameStrategy& fs : strategies) {
      const TrajectoryRecord* ch =
          find_record(dataset, ev.roles.at(Role::Changer), fs.frame);
      const TrajectoryRecord* fo =
          find_record(dataset, ev.roles.at(Role::Follower), fs.frame);
      const TrajectoryRecord* cl =
          find_record(dataset, ev.roles.at(Role::CurrentLead), fs.frame);
      const TrajectoryRecord* tl =
          find_record(dataset, ev.roles.at(Role::TargetLead), fs.frame);
      if (!ch || !fo || !cl || !tl) continue;
      ReplayFrame rf;
      rf.scene.hav = state_from(*ch, Role::Changer, Lane::Current);
      rf.scene.hv = state_from(*fo, Role::Follower, Lane::Target);
      rf.scene.lv = state_from(*cl, Role::CurrentLead, Lane::Current);
      rf.scene.tlv = state_from(*tl, Role::TargetLead, Lane::Target);
      rf.intent = fs.changer_intent;
      rf.observed = fs.follower_label;
      rf.accel = fs.follower_accel;
      re.frames.push_back(rf);
    }
    if (re.frames.empty()) {
      if (skipped) ++*skipped;
      continue;
    }
    out.push_back(std::move(re));
  }
  return out;
}

EventPrediction predict_event(const Weights& weights, const ReplayEvent& event,
                              const ReplayParams& params, double frame_rate) {
  EventPrediction pred;
  pred.event_id = event.event_id;
  TrustBelief belief =
      make_belief(params.tau0, params.table, params.update_counts);
  const double dt = 1.0 / frame_rate;
  int t = 0;
  for (const ReplayFrame& rf : event.frames) {
    const StageGame game = build_stage_game(rf.scene, event.kind, belief.tau,
                                            weights, params.hv_kin, dt,
                                            params.safety);
    const int col = column_index(likely_type(belief), rf.intent);
    const HvAction predicted = best_response(game, col);
    pred.frames.push_back(t);
    pred.predicted.push_back(predicted);
    pred.observed.push_back(rf.observed);
    if (predicted == rf.observed) ++pred.correct;
    update_trust(belief, t, rf.observed, rf.accel);
    ++t;
  }
  return pred;
}

PredictionResult predict_on(const Weights& weights,
                            const std::vector<ReplayEvent>& events,
                            const ReplayParams& params, double frame_rate,
                            int skipped) {
  PredictionResult result;
  result.skipped = skipped;
  for (const ReplayEvent& ev : events) {
    EventPrediction pred = predict_event(weights, ev, params, frame_rate);
    result.total_frames += static_cast<int>(pred.frames.size());
    result.total_correct += pred.correct;
    result.events.push_back(std::move(pred));
  }
  if (result.total_frames > 0)
    result.tpr =
        static_cast<double>(result.total_correct) / result.total_frames;
  return result;
}

double fitness_on(const Weights& weights,
                  const std::vector<ReplayEvent>& events,
                  const ReplayParams& params, double frame_rate) {
  int frames = 0, correct = 0;
  for (const ReplayEvent& ev : events) {
    const EventPrediction pred =
        predict_event(weights, ev, params, frame_rate);
    frames += static_cast<int>(pred.frames.size());
    correct += pred.correct;
  }
  return frames > 0 ? static_cast<double>(correct) / frames : 0.0;
}

}  // namespace

PredictionResult predict_actions(const Weights& weights,
                                 const std::vector<InteractionEvent>& events,
                                 const Dataset& dataset,
                                 const ExtractionOptions& options,
                                 const ReplayParams& params) {
  int skipped = 0;
  const auto replay = build_replay_events(events, dataset, options, &skipped);
  return predict_on(weights, replay, params, dataset.frame_rate, skipped);
}

PredictionResult evaluate_reference(const Weights& weights,
                                    const std::vector<InteractionEvent>& events,
                                    const Dataset& dataset,
                                    const ExtractionOptions& options,
                                    const ReplayParams& params) {
  return predict_actions(weights, events, dataset, options, params);
}

std::vector<double> evaluate_population_serial(
    const std::vector<Weights>& population,
    const std::vector<InteractionEvent>& events, const Dataset& dataset,
    const ExtractionOptions& options, const ReplayParams& params) {
  const auto replay = build_replay_events(events, dataset, options, nullptr);
  std::vector<double> fitness(population.size(), 0.0);
  for (size_t i = 0; i < population.size(); ++i)
    fitness[i] = fitness_on(population[i], replay, params, dataset.frame_rate);
  return fitness;
}

std::vector<double> evaluate_population_parallel(
    const std::vector<Weights>& population,
    const std::vector<InteractionEvent>& events, const Dataset& dataset,
    const ExtractionOptions& options, const ReplayParams& params, int jobs) {
  const auto replay = build_replay_events(events, dataset, options, nullptr);
  std::vector<double> fitness(population.size(), 0.0);
  const int n = static_cast<int>(population.size());
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int i = 0; i < n; ++i)
    fitness[i] = fitness_on(population[i], replay, params, dataset.frame_rate);
#else
  (void)jobs;
  for (int i = 0; i < n; ++i)
    fitness[i] = fitness_on(population[i], replay, params, dataset.frame_rate);
#endif
  return fitness;
}

CalibrationResult calibrate(const std::vector<InteractionEvent>& events,
                            const Dataset& dataset,
                            const ExtractionOptions& options,
                            const ReplayParams& params, const GaConfig& ga) {
  if (ga.population < 2)
    throw std::invalid_argument("calibrate: population must be at least 2");
  if (ga.generations < 1)
    throw std::invalid_argument("calibrate: generations must be at least 1");
  if (!(ga.bound_hi > ga.bound_lo))
    throw std::invalid_argument("calibrate: bound_hi must exceed bound_lo");
  if (!(ga.train_fraction > 0.0 && ga.train_fraction <= 1.0))
    throw std::invalid_argument("calibrate: train_fraction must be in (0, 1]");

  int skipped = 0;
  const auto replay = build_replay_events(events, dataset, options, &skipped);
  if (replay.empty())
    throw std::invalid_argument("calibrate: no events with decision frames");

  std::mt19937_64 rng(ga.seed);

  // Deterministic split: shuffle event indices, first slice trains.
  std::vector<size_t> order(replay.size());
  std::iota(order.begin(), order.end(), 0);
  for (size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  size_t n_train = static_cast<size_t>(
      std::lround(ga.train_fraction * static_cast<double>(order.size())));
  n_train = std::max<size_t>(1, std::min(n_train, order.size()));

  std::vector<ReplayEvent> train, val;
  CalibrationResult result;
  for (size_t i = 0; i < order.size(); ++i) {
    const ReplayEvent& ev = replay[order[i]];
    if (i < n_train) {
      train.push_back(ev);
      result.train_event_ids.push_back(ev.event_id);
    } else {
      val.push_back(ev);
      result.val_event_ids.push_back(ev.event_id);
    }
  }
  const bool val_is_train = val.empty();
  const std::vector<ReplayEvent>& val_ref = val_is_train ? train : val;
  if (val_is_train) result.val_event_ids = result.train_event_ids;

  std::vector<Weights> pop(ga.population);
  for (Weights& w : pop) {
    w.w_e = uniform_range(rng, ga.bound_lo, ga.bound_hi);
    w.w_s = uniform_range(rng, ga.bound_lo, ga.bound_hi);
    w.w_a = uniform_range(rng, ga.bound_lo, ga.bound_hi);
  }

  auto evaluate = [&](const std::vector<Weights>& population) {
    std::vector<double> fitness(population.size(), 0.0);
    const int n = static_cast<int>(population.size());
#ifdef _OPENMP
    if (ga.jobs != 1) {
      int jobs = ga.jobs <= 0 ? omp_get_max_threads() : ga.jobs;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
      for (int i = 0; i < n; ++i)
        fitness[i] =
            fitness_on(population[i], train, params, dataset.frame_rate);
      return fitness;
    }
#endif
    for (int i = 0; i < n; ++i)
      fitness[i] =
          fitness_on(population[i], train, params, dataset.frame_rate);
    return fitness;
  };

  const int elitism = std::min(std::max(ga.elitism, 0), ga.population - 1);
  Weights best_ever = pop[0];
  double best_ever_fitness = -1.0;
  bool all_flat = true;

  for (int gen = 0; gen < ga.generations; ++gen) {
    const std::vector<double> fitness = evaluate(pop);

    size_t best_i = 0;
    double sum = 0.0, lo = fitness[0], hi = fitness[0];
    for (size_t i = 0; i < fitness.size(); ++i) {
      sum += fitness[i];
      lo = std::min(lo, fitness[i]);
      hi = std::max(hi, fitness[i]);
      if (fitness[i] > fitness[best_i]) best_i = i;
    }
    if (hi - lo > 1e-12) all_flat = false;
    if (fitness[best_i] > best_ever_fitness) {
      best_ever_fitness = fitness[best_i];
      best_ever = pop[best_i];
    }

    GenerationStats stats;
    stats.generation = gen;
    stats.best_fitness = fitness[best_i];
    stats.mean_fitness = sum / fitness.size();
    stats.best = pop[best_i];
    result.history.push_back(stats);

    if (gen + 1 == ga.generations) break;

    // Next generation: elites by fitness rank, rest from tournaments.
    std::vector<size_t> rank(pop.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::sort(rank.begin(), rank.end(), [&](size_t a, size_t b) {
      if (fitness[a] != fitness[b]) return fitness[a] > fitness[b];
      return a < b;
    });

    auto tournament = [&]() -> const Weights& {
      size_t winner = uniform_index(rng, pop.size());
      for (int k = 1; k < std::max(1, ga.tournament); ++k) {
        const size_t challenger = uniform_index(rng, pop.size());
        if (fitness[challenger] > fitness[winner] ||
            (fitness[challenger] == fitness[winner] && challenger < winner))
          winner = challenger;
      }
      return pop[winner];
    };

    std::vector<Weights> next;
    next.reserve(pop.size());
    for (int e = 0; e < elitism; ++e) next.push_back(pop[rank[e]]);
    auto clip = [&](double v) {
      return std::min(ga.bound_hi, std::max(ga.bound_lo, v));
    };
    while (next.size() < pop.size()) {
      const Weights& a = tournament();
      const Weights& b = tournament();
      Weights child;
      child.w_e = uniform01(rng) < 0.5 ? a.w_e : b.w_e;
      child.w_s = uniform01(rng) < 0.5 ? a.w_s : b.w_s;
      child.w_a = uniform01(rng) < 0.5 ? a.w_a : b.w_a;
      child.w_e = clip(child.w_e + normal(rng, 0.0, ga.mutation_sigma));
      child.w_s = clip(child.w_s + normal(rng, 0.0, ga.mutation_sigma));
      child.w_a = clip(child.w_a + normal(rng, 0.0, ga.mutation_sigma));
      next.push_back(child);
    }
    pop = std::move(next);
  }

  result.best = best_ever;
  result.train_tpr = best_ever_fitness;
  result.degenerate_fitness = all_flat;
  result.validation =
      predict_on(best_ever, val_ref, params, dataset.frame_rate, skipped);
  result.val_tpr = result.validation.tpr;
  return result;
}

}  // namespace negosim
