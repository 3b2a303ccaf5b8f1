// negosim: simulator + calibration toolkit for signal-mediated lane-change
// negotiation. Four subcommands: simulate, calibrate, infer, gen. Exit codes:
// 0 success, 1 runtime failure, 2 configuration/usage error.

#include "negosim/calibrate.hpp"
#include "negosim/config.hpp"
#include "negosim/data.hpp"
#include "negosim/io.hpp"
#include "negosim/rng.hpp"
#include "negosim/sim.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace negosim;

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("NEGOSIM_OUT"); env && *env)
    return env;
  throw std::invalid_argument(
      "no output directory: pass --out/--out_dir or set NEGOSIM_OUT");
}

// Buffered writes: nothing touches the filesystem until the whole run has
// succeeded, so failed runs leave no partial outputs.
class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) {
    files_.push_back({name, std::move(content)});
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, content] : files_) out.push_back(name);
    return out;
  }

  void flush() const {
    fs::create_directories(dir_);
    for (const auto& [name, content] : files_)
      write_file((fs::path(dir_) / name).string(), content);
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

RunManifest make_manifest(const std::string& command, uint64_t seed,
                          std::map<std::string, std::string> config,
                          const std::map<std::string, std::string>& inputs,
                          const OutputSet& outputs) {
  RunManifest m;
  m.command = command;
  m.seed = seed;
  m.config = std::move(config);
  for (const auto& [path, content] : inputs) m.inputs[path] = fnv1a_hex(content);
  m.outputs = outputs.names();
  m.created_at = timestamp_now();
  return m;
}

std::string pad3(int k) {
  std::string s = std::to_string(k);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return s;
}

nlohmann::json quantiles_json(const Quantiles& q) {
  return {{"n", q.n},     {"mean", q.mean}, {"p10", q.p10}, {"p25", q.p25},
          {"p50", q.p50}, {"p75", q.p75},   {"p90", q.p90}};
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config_path;
  std::string policy = "both";
  int n = 0;  // 0: from config ([batch].n_pairs, else 1)
  std::optional<uint64_t> seed;
  int jobs = 1;
  std::string out_dir;
};

int cmd_simulate(const SimulateArgs& args) {
  const std::string out_dir = resolve_out_dir(args.out_dir);
  const std::string config_text = read_file(args.config_path);
  SimulateConfig cfg = parse_simulate_config(config_text);
  if (args.seed) {
    cfg.scenario.rng_seed = *args.seed;
    cfg.batch.seed = *args.seed;
  }

  const bool use_batch = cfg.has_batch;
  const int n = args.n > 0 ? args.n : (use_batch ? cfg.batch.n_pairs : 1);
  if (n <= 0) throw std::invalid_argument("--n must be positive");

  BatchConfig batch = cfg.batch;
  if (!use_batch) {
    batch.base = cfg.scenario;
    batch.weights = cfg.weights;
    batch.params = cfg.params;
    batch.hv_lambda = cfg.hv_model.lambda;
    batch.seed = cfg.scenario.rng_seed;
  }
  batch.n_pairs = n;

  // Pair k inputs: sampled scenes when the config has a [batch] section,
  // otherwise the fixed scene with a per-pair episode seed.
  auto pair_inputs = [&](int k, ScenarioConfig& scenario, HvDriverModel& model,
                         uint64_t& episode_seed) {
    if (use_batch) {
      sample_pair(batch, k, scenario, model, episode_seed);
    } else {
      scenario = cfg.scenario;
      model = cfg.hv_model;
      episode_seed = derive_seed(batch.seed, static_cast<uint64_t>(k));
      scenario.rng_seed = episode_seed;
    }
  };

  const bool run_honest = args.policy == "honest" || args.policy == "both";
  const bool run_deceptive =
      args.policy == "deceptive" || args.policy == "both";
  if (!run_honest && !run_deceptive)
    throw std::invalid_argument("--policy must be honest, deceptive, or both");

  const int kept_traces = std::min(n, 10);
  std::vector<PairRecord> pairs(n);
  std::vector<EpisodeResult> honest_traces(run_honest ? kept_traces : 0);
  std::vector<EpisodeResult> deceptive_traces(run_deceptive ? kept_traces : 0);

  auto run_pair = [&](int k) {
    ScenarioConfig scenario;
    HvDriverModel model;
    uint64_t episode_seed = 0;
    pair_inputs(k, scenario, model, episode_seed);
    PairRecord& rec = pairs[k];
    rec.index = k;
    rec.seed = episode_seed;
    rec.hv_type = model.type;
    auto run_arm = [&](DisclosurePolicy policy) {
      SimParams params = batch.params;
      params.disclosure.policy = policy;
      return run_episode(scenario, batch.weights, params, model, episode_seed);
    };
    if (run_honest) {
      EpisodeResult r = run_arm(DisclosurePolicy::Honest);
      if (k < kept_traces) honest_traces[k] = r;
      rec.honest.completed = r.completed;
      rec.honest.collision = r.collision;
      rec.honest.lane_change_time = r.lane_change_time;
      rec.honest.min_tdtc = r.min_tdtc;
      rec.honest.steps = static_cast<int>(r.trace.size());
      rec.honest.protective_termination = r.protective_termination;
      rec.honest.tau_final = r.tau_final;
    }
    if (run_deceptive) {
      EpisodeResult r = run_arm(DisclosurePolicy::Deceptive);
      if (k < kept_traces) deceptive_traces[k] = r;
      rec.deceptive.completed = r.completed;
      rec.deceptive.collision = r.collision;
      rec.deceptive.lane_change_time = r.lane_change_time;
      rec.deceptive.min_tdtc = r.min_tdtc;
      rec.deceptive.steps = static_cast<int>(r.trace.size());
      rec.deceptive.deception_events = static_cast<int>(r.deceptions.size());
      for (const DeceptionEvent& e : r.deceptions) {
        if (e.intended == HavAction::LaneChange) {
          ++rec.deceptive.deception_events_lc;
          if (e.success) ++rec.deceptive.deception_successes_lc;
        } else {
          ++rec.deceptive.deception_events_yield;
          if (e.success) ++rec.deceptive.deception_successes_yield;
        }
      }
      rec.deceptive.protective_termination = r.protective_termination;
      rec.deceptive.tau_final = r.tau_final;
    }
  };

#ifdef _OPENMP
  if (args.jobs != 1) {
    const int jobs = args.jobs <= 0 ? omp_get_max_threads() : args.jobs;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int k = 0; k < n; ++k) run_pair(k);
  } else
#endif
  {
    for (int k = 0; k < n; ++k) run_pair(k);
  }

  OutputSet outputs(out_dir);
  const double dt = batch.base.dt;
  for (int k = 0; k < kept_traces; ++k) {
    if (run_honest)
      outputs.add("trace_" + pad3(k) + "_honest.csv",
                  episode_trace_csv(honest_traces[k], dt));
    if (run_deceptive)
      outputs.add("trace_" + pad3(k) + "_deceptive.csv",
                  episode_trace_csv(deceptive_traces[k], dt));
  }

  BatchResult batch_result;
  batch_result.pairs = pairs;
  batch_result.stats = aggregate(pairs);
  outputs.add("pairs.csv", batch_pairs_csv(batch_result));

  nlohmann::json summary;
  summary["policy"] = args.policy;
  summary["n"] = n;
  summary["seed"] = batch.seed;
  summary["scene_source"] = use_batch ? "sampled" : "fixed";
  if (args.policy == "both") {
    summary["stats"] = nlohmann::json::parse(batch_stats_json(batch_result.stats));
  } else {
    const bool honest_arm = args.policy == "honest";
    int completed = 0, collisions = 0, protective = 0;
    std::vector<double> lct, tdtc;
    for (const PairRecord& p : pairs) {
      const EpisodeSummary& e = honest_arm ? p.honest : p.deceptive;
      if (e.completed) {
        ++completed;
        lct.push_back(e.lane_change_time);
      }
      if (e.collision) ++collisions;
      if (e.protective_termination) ++protective;
      if (std::isfinite(e.min_tdtc)) tdtc.push_back(e.min_tdtc);
    }
    summary["completed"] = completed;
    summary["collisions"] = collisions;
    summary["protective_terminations"] = protective;
    summary["lane_change_time"] = quantiles_json(quantiles(lct));
    summary["min_tdtc"] = quantiles_json(quantiles(tdtc));
  }
  outputs.add("summary.json", summary.dump(2) + "\n");

  auto config_kv = simulate_config_kv(cfg);
  config_kv["cli.policy"] = args.policy;
  config_kv["cli.n"] = std::to_string(n);
  RunManifest manifest = make_manifest(
      "simulate", batch.seed, std::move(config_kv),
      {{args.config_path, config_text}}, outputs);
  manifest.outputs.push_back("manifest.json");
  outputs.add("manifest.json", manifest_json(manifest));
  outputs.flush();

  std::cout << "simulate: n=" << n << " policy=" << args.policy;
  if (args.policy == "both") {
    const BatchStats& st = batch_result.stats;
    std::cout << " valid_pairs=" << st.n_valid
              << " frac_lct_reduced=" << format_double(st.frac_lct_reduced)
              << " frac_tdtc_increased="
              << format_double(st.frac_tdtc_increased);
  }
  std::cout << " -> " << out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string data_path;
  std::string config_path;
  std::optional<uint64_t> seed;
  int jobs = 1;
  std::string out;
};

int cmd_calibrate(const CalibrateArgs& args) {
  const std::string out_dir = resolve_out_dir(args.out);
  const std::string config_text = read_file(args.config_path);
  CalibrateFileConfig cfg = parse_calibrate_config(config_text);
  if (args.seed) cfg.ga.seed = *args.seed;
  cfg.ga.jobs = args.jobs;

  const std::string data_text = read_file(args.data_path);
  const Dataset dataset =
      load_trajectories(args.data_path, cfg.schema, cfg.frame_rate);
  const ExtractionResult extraction = extract_events(dataset, cfg.extraction);
  if (extraction.events.size() < 20)
    throw std::runtime_error(
        "insufficient events: extracted " +
        std::to_string(extraction.events.size()) + ", need at least 20");

  const CalibrationResult result =
      calibrate(extraction.events, dataset, cfg.extraction, cfg.replay, cfg.ga);

  OutputSet outputs(out_dir);

  nlohmann::json j;
  j["best"] = {{"w_e", result.best.w_e},
               {"w_s", result.best.w_s},
               {"w_a", result.best.w_a}};
  j["train_tpr"] = result.train_tpr;
  j["val_tpr"] = result.val_tpr;
  j["degenerate_fitness"] = result.degenerate_fitness;
  j["events_total"] = extraction.events.size();
  j["events_skipped_extraction"] = extraction.skipped;
  j["train_event_ids"] = result.train_event_ids;
  j["val_event_ids"] = result.val_event_ids;
  j["history"] = nlohmann::json::array();
  for (const GenerationStats& g : result.history)
    j["history"].push_back({{"generation", g.generation},
                            {"best_fitness", g.best_fitness},
                            {"mean_fitness", g.mean_fitness},
                            {"w_e", g.best.w_e},
                            {"w_s", g.best.w_s},
                            {"w_a", g.best.w_a}});
  nlohmann::json val;
  val["tpr"] = result.validation.tpr;
  val["total_frames"] = result.validation.total_frames;
  val["total_correct"] = result.validation.total_correct;
  val["events"] = nlohmann::json::array();
  for (const EventPrediction& e : result.validation.events)
    val["events"].push_back({{"event_id", e.event_id},
                             {"frames", e.frames.size()},
                             {"correct", e.correct}});
  j["validation"] = val;
  outputs.add("result.json", j.dump(2) + "\n");

  std::string history_csv = "generation,best_fitness,mean_fitness,w_e,w_s,w_a\n";
  for (const GenerationStats& g : result.history) {
    history_csv += std::to_string(g.generation);
    history_csv += ',';
    history_csv += format_double(g.best_fitness);
    history_csv += ',';
    history_csv += format_double(g.mean_fitness);
    history_csv += ',';
    history_csv += format_double(g.best.w_e);
    history_csv += ',';
    history_csv += format_double(g.best.w_s);
    history_csv += ',';
    history_csv += format_double(g.best.w_a);
    history_csv += '\n';
  }
  outputs.add("history.csv", history_csv);

  auto config_kv = calibrate_config_kv(cfg);
  RunManifest manifest = make_manifest(
      "calibrate", cfg.ga.seed, std::move(config_kv),
      {{args.config_path, config_text}, {args.data_path, data_text}}, outputs);
  manifest.outputs.push_back("manifest.json");
  outputs.add("manifest.json", manifest_json(manifest));
  outputs.flush();

  std::cout << "calibrate: events=" << extraction.events.size()
            << " train_tpr=" << format_double(result.train_tpr)
            << " val_tpr=" << format_double(result.val_tpr) << " best=("
            << format_double(result.best.w_e) << ", "
            << format_double(result.best.w_s) << ", "
            << format_double(result.best.w_a) << ") -> " << out_dir << "\n";
  return 0;
}

// ------------------------------------------------------------------- infer

struct InferArgs {
  std::string data_path;
  std::string config_path;  // optional
  int64_t driver = -1;
  bool all = false;
  std::string out;
};

int cmd_infer(const InferArgs& args) {
  const std::string out_dir = resolve_out_dir(args.out);
  InferFileConfig cfg;
  std::map<std::string, std::string> inputs;
  if (!args.config_path.empty()) {
    const std::string config_text = read_file(args.config_path);
    cfg = parse_infer_config(config_text);
    inputs[args.config_path] = config_text;
  }
  const std::string data_text = read_file(args.data_path);
  inputs[args.data_path] = data_text;

  const Dataset dataset =
      load_trajectories(args.data_path, cfg.schema, cfg.frame_rate);
  const ExtractionResult extraction = extract_events(dataset, cfg.extraction);

  std::vector<InteractionEvent> events;
  if (args.all) {
    events = extraction.events;
  } else {
    bool driver_known = false;
    for (const TrajectoryRecord& r : dataset.records)
      if (r.vehicle_id == args.driver) {
        driver_known = true;
        break;
      }
    if (!driver_known)
      throw std::runtime_error("unknown driver id " +
                               std::to_string(args.driver));
    for (const InteractionEvent& ev : extraction.events)
      if (ev.roles.at(Role::Follower) == args.driver) events.push_back(ev);
  }

  // Trust replay per event over the follower's recorded actions. The collapse
  // flag marks traces the protection rule would have stopped.
  std::string traces_csv = "event_id,frame,step,follower_action,accel,tau\n";
  std::string labels_csv =
      "event_id,follower_id,frames,driver_type,outcome_yielded,tau0,tau_min,"
      "tau_final,collapse\n";
  const DisclosureConfig protection;  // default rule: relative, threshold 0.5
  for (const InteractionEvent& ev : events) {
    TrustBelief belief =
        make_belief(cfg.replay.tau0, cfg.replay.table, cfg.replay.update_counts);
    double tau_min = belief.tau;
    bool collapse = false;
    std::vector<std::pair<int, HvAction>> labels;
    int t = 0;
    for (int64_t f = ev.first_frame; f <= ev.last_frame; ++f) {
      const TrajectoryRecord* r =
          find_record(dataset, ev.roles.at(Role::Follower), f);
      if (!r) continue;
      const HvAction label = classify_action(r->a, cfg.replay.action_threshold);
      ++t;
      labels.push_back({t, label});
      update_trust(belief, t, label, r->a);
      tau_min = std::min(tau_min, belief.tau);
      if (trust_protection_terminates(belief.tau, cfg.replay.tau0,
                                      protection.mode, protection.threshold))
        collapse = true;
      traces_csv += std::to_string(ev.event_id);
      traces_csv += ',';
      traces_csv += std::to_string(f);
      traces_csv += ',';
      traces_csv += std::to_string(t);
      traces_csv += ',';
      traces_csv += to_string(label);
      traces_csv += ',';
      traces_csv += format_double(r->a);
      traces_csv += ',';
      traces_csv += format_double(belief.tau);
      traces_csv += '\n';
    }
    const DriverType type =
        labels.empty() ? DriverType::NonCooperative
                       : classify_driver_type(labels,
                                              static_cast<int>(labels.size()),
                                              cfg.extraction.rho_c);
    labels_csv += std::to_string(ev.event_id);
    labels_csv += ',';
    labels_csv += std::to_string(ev.roles.at(Role::Follower));
    labels_csv += ',';
    labels_csv += std::to_string(labels.size());
    labels_csv += ',';
    labels_csv += to_string(type);
    labels_csv += ',';
    labels_csv += ev.outcome_yielded ? "1" : "0";
    labels_csv += ',';
    labels_csv += format_double(cfg.replay.tau0);
    labels_csv += ',';
    labels_csv += format_double(tau_min);
    labels_csv += ',';
    labels_csv += format_double(belief.tau);
    labels_csv += ',';
    labels_csv += collapse ? "1" : "0";
    labels_csv += '\n';
  }

  std::string events_csv =
      "event_id,first_frame,last_frame,crossing_frame,kind,outcome_yielded,"
      "changer,follower,current_lead,target_lead\n";
  for (const InteractionEvent& ev : events) {
    events_csv += std::to_string(ev.event_id);
    events_csv += ',';
    events_csv += std::to_string(ev.first_frame);
    events_csv += ',';
    events_csv += std::to_string(ev.last_frame);
    events_csv += ',';
    events_csv += std::to_string(ev.crossing_frame);
    events_csv += ',';
    events_csv += to_string(ev.kind);
    events_csv += ',';
    events_csv += ev.outcome_yielded ? "1" : "0";
    for (Role role : {Role::Changer, Role::Follower, Role::CurrentLead,
                      Role::TargetLead}) {
      events_csv += ',';
      events_csv += std::to_string(ev.roles.at(role));
    }
    events_csv += '\n';
  }

  OutputSet outputs(out_dir);
  outputs.add("traces.csv", traces_csv);
  outputs.add("labels.csv", labels_csv);
  outputs.add("events.csv", events_csv);

  auto config_kv = infer_config_kv(cfg);
  config_kv["cli.driver"] = args.all ? "all" : std::to_string(args.driver);
  RunManifest manifest = make_manifest("infer", cfg.cluster_seed,
                                       std::move(config_kv), inputs, outputs);
  manifest.outputs.push_back("manifest.json");
  outputs.add("manifest.json", manifest_json(manifest));
  outputs.flush();

  std::cout << "infer: events=" << events.size() << " skipped=" << extraction.skipped
            << " -> " << out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------------- gen

struct GenArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
};

int cmd_gen(const GenArgs& args) {
  const std::string out_dir = resolve_out_dir(args.out_dir);
  const std::string config_text = read_file(args.config_path);
  GenConfig cfg = parse_gen_config(config_text);
  if (args.seed) cfg.seed = *args.seed;

  const SyntheticDataset synth = generate_synthetic(cfg);

  OutputSet outputs(out_dir);
  {
    CsvTable table;
    const SchemaMap schema;
    table.header = {schema.frame, schema.id, schema.x, schema.y,
                    schema.v,     schema.a,  schema.lane};
    for (const TrajectoryRecord& r : synth.dataset.records)
      table.rows.push_back({std::to_string(r.frame),
                            std::to_string(r.vehicle_id), format_double(r.x),
                            format_double(r.y), format_double(r.v),
                            format_double(r.a), std::to_string(r.lane_id)});
    outputs.add("trajectories.csv", to_csv(table));
  }
  {
    // Same JSON as write_ground_truth, buffered with the other outputs.
    nlohmann::json j;
    j["weights"] = {{"w_e", synth.truth.weights.w_e},
                    {"w_s", synth.truth.weights.w_s},
                    {"w_a", synth.truth.weights.w_a}};
    j["tau0"] = synth.truth.tau0;
    j["ramp_zones"] = nlohmann::json::array();
    for (const auto& [lo, hi] : synth.truth.ramp_zones)
      j["ramp_zones"].push_back({lo, hi});
    j["events"] = nlohmann::json::array();
    for (const TruthEvent& e : synth.truth.events) {
      nlohmann::json je;
      je["event_id"] = e.event_id;
      je["first_frame"] = e.first_frame;
      je["last_frame"] = e.last_frame;
      nlohmann::json roles;
      for (const auto& [role, id] : e.roles) roles[to_string(role)] = id;
      je["roles"] = roles;
      je["kind"] = to_string(e.kind);
      je["hv_type"] = to_string(e.hv_type);
      je["hv_style"] = to_string(e.hv_style);
      je["episode_seed"] = e.episode_seed;
      j["events"].push_back(je);
    }
    outputs.add("ground_truth.json", j.dump(2) + "\n");
  }

  auto config_kv = gen_config_kv(cfg);
  RunManifest manifest = make_manifest("gen", cfg.seed, std::move(config_kv),
                                       {{args.config_path, config_text}},
                                       outputs);
  manifest.outputs.push_back("manifest.json");
  outputs.add("manifest.json", manifest_json(manifest));
  outputs.flush();

  std::cout << "gen: events=" << synth.truth.events.size()
            << " records=" << synth.dataset.records.size() << " -> " << out_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lane-change negotiation simulator + calibration toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "run paired honest/deceptive episodes from a config");
  sim->add_option("config", sim_args.config_path, "simulate config (ini)")
      ->required();
  sim->add_option("--policy", sim_args.policy,
                  "honest | deceptive | both (default both)")
      ->check(CLI::IsMember({"honest", "deceptive", "both"}));
  sim->add_option("--n", sim_args.n, "episode pairs (default from config)");
  uint64_t sim_seed = 0;
  CLI::Option* sim_seed_opt =
      sim->add_option("--seed", sim_seed, "override the config seed");
  sim->add_option("--jobs", sim_args.jobs,
                  "parallel episode workers (default 1, 0 = all cores)");
  sim->add_option("--out_dir", sim_args.out_dir,
                  "output directory (default $NEGOSIM_OUT)");

  CalibrateArgs cal_args;
  CLI::App* cal = app.add_subcommand(
      "calibrate", "fit payoff weights to a trajectory dataset");
  cal->add_option("data", cal_args.data_path, "trajectory csv")->required();
  cal->add_option("config", cal_args.config_path, "calibrate config (ini)")
      ->required();
  uint64_t cal_seed = 0;
  CLI::Option* cal_seed_opt =
      cal->add_option("--seed", cal_seed, "override the ga seed");
  cal->add_option("--jobs", cal_args.jobs,
                  "parallel fitness workers (default 1, 0 = all cores)");
  cal->add_option("--out", cal_args.out,
                  "output directory (default $NEGOSIM_OUT)");

  InferArgs inf_args;
  CLI::App* inf = app.add_subcommand(
      "infer", "trust traces and driver-type labels from a dataset");
  inf->add_option("data", inf_args.data_path, "trajectory csv")->required();
  inf->add_option("--config", inf_args.config_path, "infer config (ini)");
  CLI::Option* driver_opt =
      inf->add_option("--driver", inf_args.driver, "follower vehicle id");
  CLI::Option* all_opt =
      inf->add_flag("--all", inf_args.all, "all extracted events");
  driver_opt->excludes(all_opt);
  inf->add_option("--out", inf_args.out,
                  "output directory (default $NEGOSIM_OUT)");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "gen", "generate a synthetic trajectory dataset with ground truth");
  gen->add_option("config", gen_args.config_path, "gen config (ini)")
      ->required();
  uint64_t gen_seed = 0;
  CLI::Option* gen_seed_opt =
      gen->add_option("--seed", gen_seed, "override the config seed");
  gen->add_option("--out_dir", gen_args.out_dir,
                  "output directory (default $NEGOSIM_OUT)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      if (*sim_seed_opt) sim_args.seed = sim_seed;
      return cmd_simulate(sim_args);
    }
    if (cal->parsed()) {
      if (*cal_seed_opt) cal_args.seed = cal_seed;
      return cmd_calibrate(cal_args);
    }
    if (inf->parsed()) {
      if (!inf_args.all && !*driver_opt)
        throw std::invalid_argument("infer needs --driver <id> or --all");
      return cmd_infer(inf_args);
    }
    if (gen->parsed()) {
      if (*gen_seed_opt) gen_args.seed = gen_seed;
      return cmd_gen(gen_args);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
