#pragma once

#include "negosim/calibrate.hpp"
#include "negosim/data.hpp"
#include "negosim/sim.hpp"

#include <map>
#include <string>

namespace negosim {

// One simulate run: a concrete scenario and/or a batch over sampled scenes.
struct SimulateConfig {
  ScenarioConfig scenario;
  bool has_scenario = false;   // [vehicle.*] sections present
  Weights weights;
  SimParams params;
  HvDriverModel hv_model;
  BatchConfig batch;
  bool has_batch = false;      // [batch] section present
};

struct CalibrateFileConfig {
  SchemaMap schema;
  double frame_rate = 5.0;
  ExtractionOptions extraction;
  ReplayParams replay;
  GaConfig ga;
};

struct InferFileConfig {
  SchemaMap schema;
  double frame_rate = 5.0;
  ExtractionOptions extraction;
  ReplayParams replay;
  uint64_t cluster_seed = 0;
};

// Parse errors throw std::invalid_argument with the section.key name.
SimulateConfig parse_simulate_config(const std::string& ini_text);
GenConfig parse_gen_config(const std::string& ini_text);
CalibrateFileConfig parse_calibrate_config(const std::string& ini_text);
InferFileConfig parse_infer_config(const std::string& ini_text);

LikelihoodTable parse_likelihood_csv(const std::string& csv_text);
std::string likelihood_csv(const LikelihoodTable& table);

// Resolved key/value view of a parsed config, for manifests.
std::map<std::string, std::string> simulate_config_kv(const SimulateConfig& c);
std::map<std::string, std::string> gen_config_kv(const GenConfig& c);
std::map<std::string, std::string> calibrate_config_kv(
    const CalibrateFileConfig& c);
std::map<std::string, std::string> infer_config_kv(const InferFileConfig& c);

}  // namespace negosim
