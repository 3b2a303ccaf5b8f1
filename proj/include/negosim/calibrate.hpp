#pragma once

#include "negosim/data.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace negosim {

struct ReplayParams {
  double tau0 = 0.5;
  LikelihoodTable table = LikelihoodTable::defaults();
  bool update_counts = true;
  HvKinematics hv_kin;
  SafetyParams safety;
  double action_threshold = 1.0;
};

struct EventPrediction {
  int event_id = 0;
  std::vector<int64_t> frames;
  std::vector<HvAction> predicted;
  std::vector<HvAction> observed;
  int correct = 0;
};

struct PredictionResult {
  std::vector<EventPrediction> events;
  int skipped = 0;      // events with no usable decision frames
  int total_frames = 0;
  int total_correct = 0;
  double tpr = 0.0;     // per-frame accuracy over all decision frames
};

// Replays each event against the recorded states: per decision frame the
// follower's action is predicted as the best response in the (likely type,
// observed changer intent) column, then the belief is updated with the
// observed label.
PredictionResult predict_actions(const Weights& weights,
                                 const std::vector<InteractionEvent>& events,
                                 const Dataset& dataset,
                                 const ExtractionOptions& options,
                                 const ReplayParams& params);

struct GaConfig {
  int population = 40;
  int generations = 60;
  int tournament = 3;
  double mutation_sigma = 0.05;
  int elitism = 1;
  double bound_lo = 0.0;
  double bound_hi = 1.5;
  double train_fraction = 0.8;
  uint64_t seed = 0;
  int jobs = 1;
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Weights best;
};

struct CalibrationResult {
  Weights best;
  double train_tpr = 0.0;
  double val_tpr = 0.0;
  std::vector<GenerationStats> history;
  PredictionResult validation;  // per-event records on the held-out split
  bool degenerate_fitness = false;  // every individual scored the same
  std::vector<int> train_event_ids;
  std::vector<int> val_event_ids;
};

CalibrationResult calibrate(const std::vector<InteractionEvent>& events,
                            const Dataset& dataset,
                            const ExtractionOptions& options,
                            const ReplayParams& params, const GaConfig& ga);

// Convenience: per-frame accuracy of fixed weights on an event set.
PredictionResult evaluate_reference(const Weights& weights,
                                    const std::vector<InteractionEvent>& events,
                                    const Dataset& dataset,
                                    const ExtractionOptions& options,
                                    const ReplayParams& params);

// Fitness of each candidate on the training events. The parallel version
// writes into a pre-sized vector indexed by candidate, so it matches the
// serial reference exactly for any job count.
std::vector<double> evaluate_population_serial(
    const std::vector<Weights>& population,
    const std::vector<InteractionEvent>& events, const Dataset& dataset,
    const ExtractionOptions& options, const ReplayParams& params);
std::vector<double> evaluate_population_parallel(
    const std::vector<Weights>& population,
    const std::vector<InteractionEvent>& events, const Dataset& dataset,
    const ExtractionOptions& options, const ReplayParams& params, int jobs);

}  // namespace negosim
