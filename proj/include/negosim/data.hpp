#pragma once

#include "negosim/sim.hpp"
#include "negosim/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace negosim {

struct TrajectoryRecord {
  int64_t frame = 0;
  int64_t vehicle_id = 0;
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double a = 0.0;
  int lane_id = 0;
};

struct Dataset {
  std::vector<TrajectoryRecord> records;  // sorted by (vehicle_id, frame)
  double frame_rate = 25.0;               // Hz
};

// Canonical column -> header name in the file. Empty string for v/a means
// the column is absent and the series is derived from positions.
struct SchemaMap {
  std::string frame = "frame";
  std::string id = "id";
  std::string x = "x";
  std::string y = "y";
  std::string v = "xVelocity";
  std::string a = "xAcceleration";
  std::string lane = "laneId";
};

// Parse errors and invariant violations throw std::runtime_error naming the
// offending row.
Dataset load_trajectories(const std::string& path, const SchemaMap& schema,
                          double frame_rate);

void write_trajectories(const std::string& path, const Dataset& dataset,
                        const SchemaMap& schema);

// Fill v (and a) by differentiating positions: second-order central
// differences inside, one-sided at the ends; exact on quadratic motion.
void derive_kinematics(Dataset& dataset, bool derive_v, bool derive_a);

// Binary search over the sorted records; nullptr when absent.
const TrajectoryRecord* find_record(const Dataset& dataset, int64_t vehicle_id,
                                    int64_t frame);

struct InteractionEvent {
  int event_id = 0;
  int64_t first_frame = 0;
  int64_t last_frame = 0;
  int64_t crossing_frame = 0;  // first frame in the new lane
  std::map<Role, int64_t> roles;
  ScenarioKind kind = ScenarioKind::DLC;
  bool outcome_yielded = false;
};

struct ExtractionOptions {
  double pre_window_s = 4.0;
  double post_window_s = 2.0;
  double min_duration_s = 2.0;
  double max_initial_gap_m = 150.0;
  // Longitudinal intervals counted as mandatory merge/exit zones.
  std::vector<std::pair<double, double>> ramp_zones;
  double action_threshold = 1.0;  // m/s^2
  double rho_c = 0.5;
};

struct ExtractionResult {
  std::vector<InteractionEvent> events;
  int skipped = 0;  // crossings without a full role set or too short
};

ExtractionResult extract_events(const Dataset& dataset,
                                const ExtractionOptions& options);

struct FrameStrategy {
  int64_t frame = 0;
  HavAction changer_intent = HavAction::Yield;
  HvAction follower_label = HvAction::Maintain;
  double follower_accel = 0.0;
};

// Per-frame observed strategies inside the event window. The changer's
// intent is read from its lateral velocity toward the target lane
// (> 0.2 m/s counts as changing).
std::vector<FrameStrategy> infer_frame_strategies(
    const InteractionEvent& event, const Dataset& dataset,
    const ExtractionOptions& options);

struct StyleFeatures {
  int64_t vehicle_id = 0;
  double mean_headway = 0.0;   // s
  double decel_rate = 0.0;     // share of frames braking harder than 1 m/s^2
  double speed_variance = 0.0;
  double mean_abs_accel = 0.0;
};

struct StyleClustering {
  std::map<int64_t, DriverType> labels;  // Cooperative == conservative
  double conservative_fraction = 0.5;
  bool degenerate = false;  // identical features; fraction falls back to 0.5
  std::vector<StyleFeatures> features;
};

// Two-centroid split of per-driver features. The cluster with the larger
// mean headway and gentler accelerations is labeled conservative.
StyleClustering cluster_driving_styles(const Dataset& dataset,
                                       const std::vector<int64_t>& driver_ids,
                                       uint64_t seed);

// Per-style overrides so generated populations are separable: conservative
// followers get wider gaps and gentler action kinematics.
struct StyleProfile {
  HvKinematics hv_kin;
  double hv_gap_min = 6.0, hv_gap_max = 16.0;
  double lambda = 3.0;
};

struct GenConfig {
  int n_events = 100;
  SamplerRanges ranges;
  ScenarioConfig base;
  Weights weights;
  SimParams params;
  DisclosurePolicy policy = DisclosurePolicy::Honest;
  double conservative_share = 0.5;  // style mix; conservative => Cooperative
  bool lambda_strict = false;       // strict best response for all followers
  StyleProfile conservative{{0.8, 0.0, -1.4}, 14.0, 24.0, 3.0};
  StyleProfile aggressive{{2.5, 0.0, -2.6}, 5.0, 12.0, 3.0};
  double lane_width = 3.75;
  uint64_t seed = 0;
};

struct TruthEvent {
  int event_id = 0;
  int64_t first_frame = 0;
  int64_t last_frame = 0;
  std::map<Role, int64_t> roles;
  ScenarioKind kind = ScenarioKind::DLC;
  DriverType hv_type = DriverType::Cooperative;
  DriverType hv_style = DriverType::Cooperative;  // conservative == Cooperative
  uint64_t episode_seed = 0;
};

struct GroundTruth {
  Weights weights;
  double tau0 = 0.5;
  std::vector<std::pair<double, double>> ramp_zones;
  std::vector<TruthEvent> events;
};

struct SyntheticDataset {
  Dataset dataset;
  GroundTruth truth;
};

// Rolls episodes until n_events of them complete an extractable lane change
// (one final flip, follower still behind at the crossing); each event
// occupies a disjoint frame window and id block, so extract_events recovers
// the episode count and roles exactly.
SyntheticDataset generate_synthetic(const GenConfig& cfg);

void write_ground_truth(const std::string& path, const GroundTruth& truth);
GroundTruth read_ground_truth(const std::string& path);

}  // namespace negosim
