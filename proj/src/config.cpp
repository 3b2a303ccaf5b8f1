#include "negosim/config.hpp"

#include "negosim/io.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace negosim {

namespace {

// Typed access over the flat section.key map with unknown-key detection:
// anything never read is a typo and rejects the config.
class KvReader {
 public:
  explicit KvReader(std::map<std::string, std::string> kv)
      : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& def = "") {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    used_.insert(key);
    return it->second;
  }

  std::string require(const std::string& key) {
    if (!has(key))
      throw std::invalid_argument("missing required config key '" + key + "'");
    return str(key);
  }

  double num(const std::string& key, double def) {
    if (!has(key)) return def;
    return to_num(key, str(key));
  }

  double require_num(const std::string& key) {
    return to_num(key, require(key));
  }

  int integer(const std::string& key, int def) {
    const double v = num(key, def);
    if (v != std::floor(v))
      throw std::invalid_argument("config key '" + key +
                                  "': expected an integer");
    return static_cast<int>(v);
  }

  uint64_t seed(const std::string& key, uint64_t def) {
    if (!has(key)) return def;
    const std::string s = str(key);
    try {
      size_t pos = 0;
      const uint64_t v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key +
                                  "': expected a non-negative integer, got '" +
                                  s + "'");
    }
  }

  bool flag(const std::string& key, bool def) {
    if (!has(key)) return def;
    const std::string s = str(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("config key '" + key +
                                "': expected true/false, got '" + s + "'");
  }

  // Every key must have been consumed by the parser.
  void finish() const {
    for (const auto& [key, value] : kv_) {
      if (!used_.count(key))
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }

 private:
  double to_num(const std::string& key, const std::string& s) {
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key +
                                  "': expected a number, got '" + s + "'");
    }
  }

  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> used_;
};

ScenarioKind read_kind(KvReader& kv, const std::string& key,
                       ScenarioKind def) {
  if (!kv.has(key)) return def;
  const std::string s = kv.str(key);
  ScenarioKind k;
  if (!parse_scenario_kind(s, k))
    throw std::invalid_argument("config key '" + key +
                                "': expected MLC or DLC, got '" + s + "'");
  return k;
}

void read_scenario_base(KvReader& kv, ScenarioConfig& cfg) {
  cfg.kind = read_kind(kv, "scenario.kind", cfg.kind);
  cfg.dt = kv.num("scenario.dt", cfg.dt);
  cfg.horizon = kv.integer("scenario.horizon", cfg.horizon);
  cfg.lateral_duration =
      kv.num("scenario.lateral_duration", cfg.lateral_duration);
  cfg.accel_min = kv.num("scenario.accel_min", cfg.accel_min);
  cfg.accel_max = kv.num("scenario.accel_max", cfg.accel_max);
  cfg.vehicle_length = kv.num("scenario.vehicle_length", cfg.vehicle_length);
  if (kv.has("scenario.surrounding")) {
    const std::string s = kv.str("scenario.surrounding");
    if (s == "constant")
      cfg.surrounding = SurroundingPolicy::ConstantSpeed;
    else if (s == "car_following")
      cfg.surrounding = SurroundingPolicy::CarFollowing;
    else
      throw std::invalid_argument(
          "config key 'scenario.surrounding': expected constant or "
          "car_following, got '" +
          s + "'");
  }
}

bool read_vehicle(KvReader& kv, const std::string& section, VehicleState& out,
                  Role role, Lane default_lane, int id) {
  const std::string p = section + ".";
  if (!kv.has(p + "x") && !kv.has(p + "v") && !kv.has(p + "a") &&
      !kv.has(p + "lane"))
    return false;
  out.id = id;
  out.role = role;
  out.x = kv.require_num(p + "x");
  out.v = kv.require_num(p + "v");
  out.a = kv.num(p + "a", 0.0);
  out.lane = default_lane;
  if (kv.has(p + "lane")) {
    const std::string s = kv.str(p + "lane");
    if (s == "current")
      out.lane = Lane::Current;
    else if (s == "target")
      out.lane = Lane::Target;
    else
      throw std::invalid_argument("config key '" + p +
                                  "lane': expected current or target, got '" +
                                  s + "'");
  }
  return true;
}

void read_weights(KvReader& kv, Weights& w) {
  w.w_e = kv.require_num("weights.w_e");
  w.w_s = kv.require_num("weights.w_s");
  w.w_a = kv.require_num("weights.w_a");
}

void read_hv_kin(KvReader& kv, const std::string& section, HvKinematics& kin) {
  kin.accelerate = kv.num(section + ".accelerate", kin.accelerate);
  kin.maintain = kv.num(section + ".maintain", kin.maintain);
  kin.decelerate = kv.num(section + ".decelerate", kin.decelerate);
}

void read_likelihoods(KvReader& kv, LikelihoodTable& table) {
  const char* types[2] = {"cooperative", "noncooperative"};
  const char* actions[3] = {"maintain", "accelerate", "decelerate"};
  for (int t = 0; t < 2; ++t)
    for (int a = 0; a < 3; ++a) {
      const std::string key =
          std::string("likelihoods.") + types[t] + "_" + actions[a];
      table.counts[t][a] = kv.num(key, table.counts[t][a]);
    }
}

void read_sim_params(KvReader& kv, SimParams& params) {
  params.tau0 = kv.num("params.tau0", params.tau0);
  params.update_counts = kv.flag("params.update_counts", params.update_counts);
  params.gate_min_ttc = kv.num("params.gate_min_ttc", params.gate_min_ttc);
  params.yield_accel = kv.num("params.yield_accel", params.yield_accel);
  params.action_threshold =
      kv.num("params.action_threshold", params.action_threshold);
  params.safety.epsilon = kv.num("params.epsilon", params.safety.epsilon);
  read_hv_kin(kv, "hv", params.hv_kin);
  read_likelihoods(kv, params.table);

  if (kv.has("disclosure.policy")) {
    const std::string s = kv.str("disclosure.policy");
    if (s == "honest")
      params.disclosure.policy = DisclosurePolicy::Honest;
    else if (s == "deceptive")
      params.disclosure.policy = DisclosurePolicy::Deceptive;
    else
      throw std::invalid_argument(
          "config key 'disclosure.policy': expected honest or deceptive, "
          "got '" +
          s + "'");
  }
  if (kv.has("disclosure.mode")) {
    const std::string s = kv.str("disclosure.mode");
    if (s == "relative")
      params.disclosure.mode = TrustThresholdMode::RelativeLoss;
    else if (s == "absolute")
      params.disclosure.mode = TrustThresholdMode::Absolute;
    else
      throw std::invalid_argument(
          "config key 'disclosure.mode': expected relative or absolute, "
          "got '" +
          s + "'");
  }
  params.disclosure.threshold =
      kv.num("disclosure.threshold", params.disclosure.threshold);
}

void read_ranges(KvReader& kv, const std::string& section,
                 SamplerRanges& ranges) {
  const std::string p = section + ".";
  ranges.kind = read_kind(kv, p + "kind", ranges.kind);
  ranges.hav_v_min = kv.num(p + "hav_v_min", ranges.hav_v_min);
  ranges.hav_v_max = kv.num(p + "hav_v_max", ranges.hav_v_max);
  ranges.hv_dv_min = kv.num(p + "hv_dv_min", ranges.hv_dv_min);
  ranges.hv_dv_max = kv.num(p + "hv_dv_max", ranges.hv_dv_max);
  ranges.tlv_dv_min = kv.num(p + "tlv_dv_min", ranges.tlv_dv_min);
  ranges.tlv_dv_max = kv.num(p + "tlv_dv_max", ranges.tlv_dv_max);
  ranges.lv_dv_min = kv.num(p + "lv_dv_min", ranges.lv_dv_min);
  ranges.lv_dv_max = kv.num(p + "lv_dv_max", ranges.lv_dv_max);
  ranges.hv_gap_min = kv.num(p + "hv_gap_min", ranges.hv_gap_min);
  ranges.hv_gap_max = kv.num(p + "hv_gap_max", ranges.hv_gap_max);
  ranges.tlv_gap_min = kv.num(p + "tlv_gap_min", ranges.tlv_gap_min);
  ranges.tlv_gap_max = kv.num(p + "tlv_gap_max", ranges.tlv_gap_max);
  ranges.lv_gap_min = kv.num(p + "lv_gap_min", ranges.lv_gap_min);
  ranges.lv_gap_max = kv.num(p + "lv_gap_max", ranges.lv_gap_max);
}

void read_schema(KvReader& kv, SchemaMap& schema) {
  schema.frame = kv.str("schema.frame", schema.frame);
  schema.id = kv.str("schema.id", schema.id);
  schema.x = kv.str("schema.x", schema.x);
  schema.y = kv.str("schema.y", schema.y);
  schema.v = kv.str("schema.v", schema.v);
  schema.a = kv.str("schema.a", schema.a);
  schema.lane = kv.str("schema.lane", schema.lane);
}

std::vector<std::pair<double, double>> parse_zones(const std::string& key,
                                                   const std::string& text) {
  std::vector<std::pair<double, double>> zones;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find(';', pos);
    if (end == std::string::npos) end = text.size();
    const std::string part = text.substr(pos, end - pos);
    pos = end + 1;
    if (part.empty()) continue;
    const size_t colon = part.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("config key '" + key +
                                  "': expected lo:hi pairs separated by ';'");
    try {
      size_t p1 = 0, p2 = 0;
      const double lo = std::stod(part.substr(0, colon), &p1);
      const double hi = std::stod(part.substr(colon + 1), &p2);
      if (p1 != colon || p2 != part.size() - colon - 1 || hi < lo)
        throw std::invalid_argument(part);
      zones.push_back({lo, hi});
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key + "': bad zone '" +
                                  part + "'");
    }
  }
  return zones;
}

void read_extraction(KvReader& kv, ExtractionOptions& opt) {
  opt.pre_window_s = kv.num("extraction.pre_window_s", opt.pre_window_s);
  opt.post_window_s = kv.num("extraction.post_window_s", opt.post_window_s);
  opt.min_duration_s = kv.num("extraction.min_duration_s", opt.min_duration_s);
  opt.max_initial_gap_m =
      kv.num("extraction.max_initial_gap_m", opt.max_initial_gap_m);
  opt.action_threshold =
      kv.num("extraction.action_threshold", opt.action_threshold);
  opt.rho_c = kv.num("extraction.rho_c", opt.rho_c);
  if (kv.has("extraction.ramp_zones"))
    opt.ramp_zones =
        parse_zones("extraction.ramp_zones", kv.str("extraction.ramp_zones"));
}

void read_replay(KvReader& kv, ReplayParams& params) {
  params.tau0 = kv.num("replay.tau0", params.tau0);
  params.update_counts = kv.flag("replay.update_counts", params.update_counts);
  params.action_threshold =
      kv.num("replay.action_threshold", params.action_threshold);
  params.safety.epsilon = kv.num("replay.epsilon", params.safety.epsilon);
  params.hv_kin.accelerate =
      kv.num("replay.accelerate", params.hv_kin.accelerate);
  params.hv_kin.maintain = kv.num("replay.maintain", params.hv_kin.maintain);
  params.hv_kin.decelerate =
      kv.num("replay.decelerate", params.hv_kin.decelerate);
  read_likelihoods(kv, params.table);
}

}  // namespace

SimulateConfig parse_simulate_config(const std::string& ini_text) {
  KvReader kv(read_ini(ini_text));
  SimulateConfig cfg;

  read_scenario_base(kv, cfg.scenario);
  cfg.scenario.rng_seed = kv.seed("run.seed", cfg.scenario.rng_seed);

  const bool hav = read_vehicle(kv, "vehicle.hav", cfg.scenario.initial.hav,
                                Role::Changer, Lane::Current, 1);
  const bool hv = read_vehicle(kv, "vehicle.hv", cfg.scenario.initial.hv,
                               Role::Follower, Lane::Target, 2);
  const bool lv = read_vehicle(kv, "vehicle.lv", cfg.scenario.initial.lv,
                               Role::CurrentLead, Lane::Current, 3);
  const bool tlv = read_vehicle(kv, "vehicle.tlv", cfg.scenario.initial.tlv,
                                Role::TargetLead, Lane::Target, 4);
  if (hav || hv || lv || tlv) {
    if (!(hav && hv && lv && tlv))
      throw std::invalid_argument(
          "config: all four [vehicle.*] sections are required when any is "
          "present");
    cfg.has_scenario = true;
  }

  read_weights(kv, cfg.weights);
  read_sim_params(kv, cfg.params);

  if (kv.has("hv.type")) {
    const std::string s = kv.str("hv.type");
    if (s == "cooperative")
      cfg.hv_model.type = DriverType::Cooperative;
    else if (s == "noncooperative")
      cfg.hv_model.type = DriverType::NonCooperative;
    else
      throw std::invalid_argument(
          "config key 'hv.type': expected cooperative or noncooperative, "
          "got '" +
          s + "'");
  }
  if (kv.has("hv.lambda")) {
    const std::string s = kv.str("hv.lambda");
    cfg.hv_model.lambda = s == "inf" ? kInf : kv.num("hv.lambda", 3.0);
  }

  cfg.has_batch = kv.has("batch.n_pairs");
  if (cfg.has_batch) {
    cfg.batch.n_pairs = kv.integer("batch.n_pairs", cfg.batch.n_pairs);
    cfg.batch.seed = kv.seed("batch.seed", cfg.scenario.rng_seed);
    read_ranges(kv, "batch", cfg.batch.ranges);
    cfg.batch.base = cfg.scenario;
    cfg.batch.weights = cfg.weights;
    cfg.batch.params = cfg.params;
    cfg.batch.hv_lambda = cfg.hv_model.lambda;
    if (cfg.batch.n_pairs <= 0)
      throw std::invalid_argument(
          "config key 'batch.n_pairs': must be positive");
  }

  if (!cfg.has_scenario && !cfg.has_batch)
    throw std::invalid_argument(
        "config: needs [vehicle.*] sections or a [batch] section");

  kv.finish();
  return cfg;
}

GenConfig parse_gen_config(const std::string& ini_text) {
  KvReader kv(read_ini(ini_text));
  GenConfig cfg;

  cfg.n_events = kv.integer("gen.n_events", cfg.n_events);
  if (cfg.n_events <= 0)
    throw std::invalid_argument("config key 'gen.n_events': must be positive");
  cfg.seed = kv.seed("gen.seed", cfg.seed);
  cfg.conservative_share =
      kv.num("gen.conservative_share", cfg.conservative_share);
  cfg.lambda_strict = kv.flag("gen.lambda_strict", cfg.lambda_strict);
  cfg.lane_width = kv.num("gen.lane_width", cfg.lane_width);

  read_scenario_base(kv, cfg.base);
  read_weights(kv, cfg.weights);
  read_sim_params(kv, cfg.params);
  cfg.policy = cfg.params.disclosure.policy;
  read_ranges(kv, "ranges", cfg.ranges);

  auto read_style = [&](const std::string& section, StyleProfile& style) {
    read_hv_kin(kv, section, style.hv_kin);
    style.hv_gap_min = kv.num(section + ".gap_min", style.hv_gap_min);
    style.hv_gap_max = kv.num(section + ".gap_max", style.hv_gap_max);
    style.lambda = kv.num(section + ".lambda", style.lambda);
  };
  read_style("style.conservative", cfg.conservative);
  read_style("style.aggressive", cfg.aggressive);

  kv.finish();
  return cfg;
}

CalibrateFileConfig parse_calibrate_config(const std::string& ini_text) {
  KvReader kv(read_ini(ini_text));
  CalibrateFileConfig cfg;

  read_schema(kv, cfg.schema);
  cfg.frame_rate = kv.num("data.frame_rate", cfg.frame_rate);
  read_extraction(kv, cfg.extraction);
  read_replay(kv, cfg.replay);

  cfg.ga.population = kv.integer("ga.population", cfg.ga.population);
  cfg.ga.generations = kv.integer("ga.generations", cfg.ga.generations);
  cfg.ga.tournament = kv.integer("ga.tournament", cfg.ga.tournament);
  cfg.ga.mutation_sigma = kv.num("ga.mutation_sigma", cfg.ga.mutation_sigma);
  cfg.ga.elitism = kv.integer("ga.elitism", cfg.ga.elitism);
  cfg.ga.bound_lo = kv.num("ga.bound_lo", cfg.ga.bound_lo);
  cfg.ga.bound_hi = kv.num("ga.bound_hi", cfg.ga.bound_hi);
  cfg.ga.train_fraction = kv.num("ga.train_fraction", cfg.ga.train_fraction);
  cfg.ga.seed = kv.seed("ga.seed", cfg.ga.seed);

  kv.finish();
  return cfg;
}

InferFileConfig parse_infer_config(const std::string& ini_text) {
  KvReader kv(read_ini(ini_text));
  InferFileConfig cfg;

  read_schema(kv, cfg.schema);
  cfg.frame_rate = kv.num("data.frame_rate", cfg.frame_rate);
  read_extraction(kv, cfg.extraction);
  read_replay(kv, cfg.replay);
  cfg.cluster_seed = kv.seed("infer.cluster_seed", cfg.cluster_seed);

  kv.finish();
  return cfg;
}

LikelihoodTable parse_likelihood_csv(const std::string& csv_text) {
  LikelihoodTable table{};
  std::vector<std::vector<std::string>> lines;
  size_t pos = 0;
  while (pos < csv_text.size()) {
    size_t end = csv_text.find('\n', pos);
    if (end == std::string::npos) end = csv_text.size();
    std::string line = csv_text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t fpos = 0;
    while (true) {
      size_t comma = line.find(',', fpos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(fpos));
        break;
      }
      fields.push_back(line.substr(fpos, comma - fpos));
      fpos = comma + 1;
    }
    lines.push_back(std::move(fields));
  }
  if (lines.size() != 3 || lines[0].size() != 4)
    throw std::invalid_argument(
        "likelihood csv: expected header + one row per driver type");
  const std::vector<std::string> expect = {"type", "maintain", "accelerate",
                                           "decelerate"};
  for (int i = 0; i < 4; ++i)
    if (lines[0][i] != expect[i])
      throw std::invalid_argument(
          "likelihood csv: header must be type,maintain,accelerate,decelerate");
  bool seen[2] = {false, false};
  for (int r = 1; r <= 2; ++r) {
    if (lines[r].size() != 4)
      throw std::invalid_argument("likelihood csv: row " + std::to_string(r) +
                                  " needs 4 fields");
    int t;
    if (lines[r][0] == "cooperative")
      t = 0;
    else if (lines[r][0] == "noncooperative")
      t = 1;
    else
      throw std::invalid_argument("likelihood csv: unknown type '" +
                                  lines[r][0] + "'");
    seen[t] = true;
    for (int a = 0; a < 3; ++a) {
      try {
        size_t p = 0;
        table.counts[t][a] = std::stod(lines[r][a + 1], &p);
        if (p != lines[r][a + 1].size())
          throw std::invalid_argument(lines[r][a + 1]);
      } catch (const std::exception&) {
        throw std::invalid_argument("likelihood csv: bad count '" +
                                    lines[r][a + 1] + "'");
      }
    }
  }
  if (!seen[0] || !seen[1])
    throw std::invalid_argument("likelihood csv: both driver types required");
  return table;
}

std::string likelihood_csv(const LikelihoodTable& table) {
  std::string out = "type,maintain,accelerate,decelerate\n";
  const char* types[2] = {"cooperative", "noncooperative"};
  for (int t = 0; t < 2; ++t) {
    out += types[t];
    for (int a = 0; a < 3; ++a) {
      out += ',';
      out += format_double(table.counts[t][a]);
    }
    out += '\n';
  }
  return out;
}

namespace {

void put(std::map<std::string, std::string>& kv, const std::string& key,
         double v) {
  kv[key] = format_double(v);
}

void put_scenario(std::map<std::string, std::string>& kv,
                  const ScenarioConfig& c) {
  kv["scenario.kind"] = to_string(c.kind);
  put(kv, "scenario.dt", c.dt);
  kv["scenario.horizon"] = std::to_string(c.horizon);
  put(kv, "scenario.lateral_duration", c.lateral_duration);
  put(kv, "scenario.accel_min", c.accel_min);
  put(kv, "scenario.accel_max", c.accel_max);
  put(kv, "scenario.vehicle_length", c.vehicle_length);
  kv["scenario.surrounding"] =
      c.surrounding == SurroundingPolicy::ConstantSpeed ? "constant"
                                                        : "car_following";
}

void put_weights(std::map<std::string, std::string>& kv, const Weights& w) {
  put(kv, "weights.w_e", w.w_e);
  put(kv, "weights.w_s", w.w_s);
  put(kv, "weights.w_a", w.w_a);
}

void put_params(std::map<std::string, std::string>& kv, const SimParams& p) {
  put(kv, "params.tau0", p.tau0);
  kv["params.update_counts"] = p.update_counts ? "true" : "false";
  put(kv, "params.gate_min_ttc", p.gate_min_ttc);
  put(kv, "params.yield_accel", p.yield_accel);
  put(kv, "params.action_threshold", p.action_threshold);
  put(kv, "params.epsilon", p.safety.epsilon);
  kv["disclosure.policy"] =
      p.disclosure.policy == DisclosurePolicy::Honest ? "honest" : "deceptive";
  kv["disclosure.mode"] =
      p.disclosure.mode == TrustThresholdMode::RelativeLoss ? "relative"
                                                            : "absolute";
  put(kv, "disclosure.threshold", p.disclosure.threshold);
  put(kv, "hv.accelerate", p.hv_kin.accelerate);
  put(kv, "hv.maintain", p.hv_kin.maintain);
  put(kv, "hv.decelerate", p.hv_kin.decelerate);
  const char* types[2] = {"cooperative", "noncooperative"};
  const char* actions[3] = {"maintain", "accelerate", "decelerate"};
  for (int t = 0; t < 2; ++t)
    for (int a = 0; a < 3; ++a)
      put(kv, std::string("likelihoods.") + types[t] + "_" + actions[a],
          p.table.counts[t][a]);
}

void put_ranges(std::map<std::string, std::string>& kv,
                const std::string& section, const SamplerRanges& r) {
  const std::string p = section + ".";
  kv[p + "kind"] = to_string(r.kind);
  put(kv, p + "hav_v_min", r.hav_v_min);
  put(kv, p + "hav_v_max", r.hav_v_max);
  put(kv, p + "hv_dv_min", r.hv_dv_min);
  put(kv, p + "hv_dv_max", r.hv_dv_max);
  put(kv, p + "tlv_dv_min", r.tlv_dv_min);
  put(kv, p + "tlv_dv_max", r.tlv_dv_max);
  put(kv, p + "lv_dv_min", r.lv_dv_min);
  put(kv, p + "lv_dv_max", r.lv_dv_max);
  put(kv, p + "hv_gap_min", r.hv_gap_min);
  put(kv, p + "hv_gap_max", r.hv_gap_max);
  put(kv, p + "tlv_gap_min", r.tlv_gap_min);
  put(kv, p + "tlv_gap_max", r.tlv_gap_max);
  put(kv, p + "lv_gap_min", r.lv_gap_min);
  put(kv, p + "lv_gap_max", r.lv_gap_max);
}

void put_schema(std::map<std::string, std::string>& kv, const SchemaMap& s) {
  kv["schema.frame"] = s.frame;
  kv["schema.id"] = s.id;
  kv["schema.x"] = s.x;
  kv["schema.y"] = s.y;
  kv["schema.v"] = s.v;
  kv["schema.a"] = s.a;
  kv["schema.lane"] = s.lane;
}

void put_extraction(std::map<std::string, std::string>& kv,
                    const ExtractionOptions& o) {
  put(kv, "extraction.pre_window_s", o.pre_window_s);
  put(kv, "extraction.post_window_s", o.post_window_s);
  put(kv, "extraction.min_duration_s", o.min_duration_s);
  put(kv, "extraction.max_initial_gap_m", o.max_initial_gap_m);
  put(kv, "extraction.action_threshold", o.action_threshold);
  put(kv, "extraction.rho_c", o.rho_c);
  std::string zones;
  for (const auto& [lo, hi] : o.ramp_zones) {
    if (!zones.empty()) zones += ';';
    zones += format_double(lo) + ":" + format_double(hi);
  }
  kv["extraction.ramp_zones"] = zones;
}

void put_replay(std::map<std::string, std::string>& kv,
                const ReplayParams& p) {
  put(kv, "replay.tau0", p.tau0);
  kv["replay.update_counts"] = p.update_counts ? "true" : "false";
  put(kv, "replay.action_threshold", p.action_threshold);
  put(kv, "replay.epsilon", p.safety.epsilon);
  put(kv, "replay.accelerate", p.hv_kin.accelerate);
  put(kv, "replay.maintain", p.hv_kin.maintain);
  put(kv, "replay.decelerate", p.hv_kin.decelerate);
}

}  // namespace

std::map<std::string, std::string> simulate_config_kv(
    const SimulateConfig& c) {
  std::map<std::string, std::string> kv;
  put_scenario(kv, c.scenario);
  put_weights(kv, c.weights);
  put_params(kv, c.params);
  kv["hv.type"] = to_string(c.hv_model.type);
  kv["hv.lambda"] = format_double(c.hv_model.lambda);
  if (c.has_scenario) {
    const char* names[4] = {"vehicle.hav", "vehicle.hv", "vehicle.lv",
                            "vehicle.tlv"};
    const VehicleState* states[4] = {
        &c.scenario.initial.hav, &c.scenario.initial.hv,
        &c.scenario.initial.lv, &c.scenario.initial.tlv};
    for (int i = 0; i < 4; ++i) {
      const std::string p = std::string(names[i]) + ".";
      put(kv, p + "x", states[i]->x);
      put(kv, p + "v", states[i]->v);
      put(kv, p + "a", states[i]->a);
      kv[p + "lane"] = to_string(states[i]->lane);
    }
  }
  if (c.has_batch) {
    kv["batch.n_pairs"] = std::to_string(c.batch.n_pairs);
    kv["batch.seed"] = std::to_string(c.batch.seed);
    put(kv, "batch.hv_lambda", c.batch.hv_lambda);
    put_ranges(kv, "batch", c.batch.ranges);
  }
  return kv;
}

std::map<std::string, std::string> gen_config_kv(const GenConfig& c) {
  std::map<std::string, std::string> kv;
  kv["gen.n_events"] = std::to_string(c.n_events);
  kv["gen.seed"] = std::to_string(c.seed);
  put(kv, "gen.conservative_share", c.conservative_share);
  kv["gen.lambda_strict"] = c.lambda_strict ? "true" : "false";
  put(kv, "gen.lane_width", c.lane_width);
  put_scenario(kv, c.base);
  put_weights(kv, c.weights);
  put_params(kv, c.params);
  put_ranges(kv, "ranges", c.ranges);
  auto put_style = [&](const std::string& s, const StyleProfile& st) {
    put(kv, s + ".accelerate", st.hv_kin.accelerate);
    put(kv, s + ".maintain", st.hv_kin.maintain);
    put(kv, s + ".decelerate", st.hv_kin.decelerate);
    put(kv, s + ".gap_min", st.hv_gap_min);
    put(kv, s + ".gap_max", st.hv_gap_max);
    put(kv, s + ".lambda", st.lambda);
  };
  put_style("style.conservative", c.conservative);
  put_style("style.aggressive", c.aggressive);
  return kv;
}

std::map<std::string, std::string> calibrate_config_kv(
    const CalibrateFileConfig& c) {
  std::map<std::string, std::string> kv;
  put_schema(kv, c.schema);
  put(kv, "data.frame_rate", c.frame_rate);
  put_extraction(kv, c.extraction);
  put_replay(kv, c.replay);
  kv["ga.population"] = std::to_string(c.ga.population);
  kv["ga.generations"] = std::to_string(c.ga.generations);
  kv["ga.tournament"] = std::to_string(c.ga.tournament);
  put(kv, "ga.mutation_sigma", c.ga.mutation_sigma);
  kv["ga.elitism"] = std::to_string(c.ga.elitism);
  put(kv, "ga.bound_lo", c.ga.bound_lo);
  put(kv, "ga.bound_hi", c.ga.bound_hi);
  put(kv, "ga.train_fraction", c.ga.train_fraction);
  kv["ga.seed"] = std::to_string(c.ga.seed);
  return kv;
}

std::map<std::string, std::string> infer_config_kv(const InferFileConfig& c) {
  std::map<std::string, std::string> kv;
  put_schema(kv, c.schema);
  put(kv, "data.frame_rate", c.frame_rate);
  put_extraction(kv, c.extraction);
  put_replay(kv, c.replay);
  kv["infer.cluster_seed"] = std::to_string(c.cluster_seed);
  return kv;
}

}  // namespace negosim
