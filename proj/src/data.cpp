#include "negosim/data.hpp"

#include "negosim/io.hpp"
#include "negosim/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace negosim {

namespace {

double parse_num(const std::string& s, const std::string& what, size_t row) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("trajectory row " + std::to_string(row) +
                             ": bad " + what + " value '" + s + "'");
  }
}

int64_t parse_int(const std::string& s, const std::string& what, size_t row) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("trajectory row " + std::to_string(row) +
                             ": bad " + what + " value '" + s + "'");
  }
}

void sort_records(Dataset& ds) {
  std::sort(ds.records.begin(), ds.records.end(),
            [](const TrajectoryRecord& a, const TrajectoryRecord& b) {
              if (a.vehicle_id != b.vehicle_id)
                return a.vehicle_id < b.vehicle_id;
              return a.frame < b.frame;
            });
}

// Contiguous [begin, end) index ranges per vehicle; records must be sorted.
std::map<int64_t, std::pair<size_t, size_t>> vehicle_spans(const Dataset& ds) {
  std::map<int64_t, std::pair<size_t, size_t>> spans;
  size_t i = 0;
  while (i < ds.records.size()) {
    const int64_t id = ds.records[i].vehicle_id;
    size_t j = i;
    while (j < ds.records.size() && ds.records[j].vehicle_id == id) ++j;
    spans[id] = {i, j};
    i = j;
  }
  return spans;
}

const TrajectoryRecord* record_at(const Dataset& ds,
                                  const std::pair<size_t, size_t>& span,
                                  int64_t frame) {
  const auto begin = ds.records.begin() + span.first;
  const auto end = ds.records.begin() + span.second;
  const auto it = std::lower_bound(
      begin, end, frame, [](const TrajectoryRecord& r, int64_t f) {
        return r.frame < f;
      });
  if (it == end || it->frame != frame) return nullptr;
  return &*it;
}

}  // namespace

Dataset load_trajectories(const std::string& path, const SchemaMap& schema,
                          double frame_rate) {
  if (!(frame_rate > 0.0))
    throw std::runtime_error("load_trajectories: frame_rate must be positive");
  const CsvTable table = read_csv(path);
  const int c_frame = table.column(schema.frame);
  const int c_id = table.column(schema.id);
  const int c_x = table.column(schema.x);
  const int c_y = table.column(schema.y);
  const int c_lane = table.column(schema.lane);
  for (const auto& [name, col] :
       {std::pair<std::string, int>{schema.frame, c_frame},
        {schema.id, c_id},
        {schema.x, c_x},
        {schema.y, c_y},
        {schema.lane, c_lane}}) {
    if (col < 0)
      throw std::runtime_error("load_trajectories: missing column '" + name +
                               "' in " + path);
  }
  const int c_v = schema.v.empty() ? -1 : table.column(schema.v);
  const int c_a = schema.a.empty() ? -1 : table.column(schema.a);

  Dataset ds;
  ds.frame_rate = frame_rate;
  ds.records.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    TrajectoryRecord rec;
    rec.frame = parse_int(row[c_frame], "frame", r);
    rec.vehicle_id = parse_int(row[c_id], "id", r);
    rec.x = parse_num(row[c_x], "x", r);
    rec.y = parse_num(row[c_y], "y", r);
    rec.lane_id = static_cast<int>(parse_int(row[c_lane], "lane", r));
    if (c_v >= 0) rec.v = parse_num(row[c_v], "v", r);
    if (c_a >= 0) rec.a = parse_num(row[c_a], "a", r);
    ds.records.push_back(rec);
  }
  sort_records(ds);
  derive_kinematics(ds, c_v < 0, c_a < 0);
  return ds;
}

void write_trajectories(const std::string& path, const Dataset& dataset,
                        const SchemaMap& schema) {
  CsvTable table;
  const std::string v_name = schema.v.empty() ? "xVelocity" : schema.v;
  const std::string a_name = schema.a.empty() ? "xAcceleration" : schema.a;
  table.header = {schema.frame, schema.id, schema.x, schema.y,
                  v_name,       a_name,    schema.lane};
  table.rows.reserve(dataset.records.size());
  for (const TrajectoryRecord& r : dataset.records) {
    table.rows.push_back({std::to_string(r.frame), std::to_string(r.vehicle_id),
                          format_double(r.x), format_double(r.y),
                          format_double(r.v), format_double(r.a),
                          std::to_string(r.lane_id)});
  }
  write_file(path, to_csv(table));
}

void derive_kinematics(Dataset& dataset, bool derive_v, bool derive_a) {
  if (!derive_v && !derive_a) return;
  const double dt = 1.0 / dataset.frame_rate;

  // Second-order operator: central inside, one-sided at the ends. Exact for
  // quadratic series.
  auto differentiate = [dt](const std::vector<double>& f) {
    const size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n == 1) return d;
    if (n == 2) {
      d[0] = d[1] = (f[1] - f[0]) / dt;
      return d;
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    for (size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dt);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    return d;
  };

  size_t i = 0;
  while (i < dataset.records.size()) {
    const int64_t id = dataset.records[i].vehicle_id;
    size_t j = i;
    while (j < dataset.records.size() && dataset.records[j].vehicle_id == id)
      ++j;
    const size_t n = j - i;
    std::vector<double> series(n);
    if (derive_v) {
      for (size_t k = 0; k < n; ++k) series[k] = dataset.records[i + k].x;
      const auto v = differentiate(series);
      for (size_t k = 0; k < n; ++k) dataset.records[i + k].v = v[k];
    }
    if (derive_a) {
      for (size_t k = 0; k < n; ++k) series[k] = dataset.records[i + k].v;
      const auto a = differentiate(series);
      for (size_t k = 0; k < n; ++k) dataset.records[i + k].a = a[k];
    }
    i = j;
  }
}

const TrajectoryRecord* find_record(const Dataset& dataset, int64_t vehicle_id,
                                    int64_t frame) {
  const auto it = std::lower_bound(
      dataset.records.begin(), dataset.records.end(),
      std::make_pair(vehicle_id, frame),
      [](const TrajectoryRecord& r, const std::pair<int64_t, int64_t>& key) {
        if (r.vehicle_id != key.first) return r.vehicle_id < key.first;
        return r.frame < key.second;
      });
  if (it == dataset.records.end() || it->vehicle_id != vehicle_id ||
      it->frame != frame)
    return nullptr;
  return &*it;
}

ExtractionResult extract_events(const Dataset& dataset,
                                const ExtractionOptions& options) {
  ExtractionResult result;
  const auto spans = vehicle_spans(dataset);

  // All records at one frame, for the nearest-neighbor role search.
  std::unordered_map<int64_t, std::vector<const TrajectoryRecord*>> by_frame;
  for (const TrajectoryRecord& r : dataset.records)
    by_frame[r.frame].push_back(&r);

  const auto in_ramp = [&](double x) {
    for (const auto& [lo, hi] : options.ramp_zones)
      if (x >= lo && x <= hi) return true;
    return false;
  };

  struct Crossing {
    int64_t changer;
    int64_t frame;  // first frame in the new lane
    int origin_lane;
    int target_lane;
  };
  std::vector<Crossing> crossings;
  for (const auto& [id, span] : spans) {
    for (size_t k = span.first + 1; k < span.second; ++k) {
      const TrajectoryRecord& prev = dataset.records[k - 1];
      const TrajectoryRecord& cur = dataset.records[k];
      if (cur.frame == prev.frame + 1 && cur.lane_id != prev.lane_id)
        crossings.push_back({id, cur.frame, prev.lane_id, cur.lane_id});
    }
  }
  std::sort(crossings.begin(), crossings.end(),
            [](const Crossing& a, const Crossing& b) {
              if (a.frame != b.frame) return a.frame < b.frame;
              return a.changer < b.changer;
            });

  const int64_t pre =
      static_cast<int64_t>(std::lround(options.pre_window_s * dataset.frame_rate));
  const int64_t post = static_cast<int64_t>(
      std::lround(options.post_window_s * dataset.frame_rate));

  for (const Crossing& c : crossings) {
    const auto& changer_span = spans.at(c.changer);
    const TrajectoryRecord* changer = record_at(dataset, changer_span, c.frame);
    if (!changer) {
      ++result.skipped;
      continue;
    }

    const TrajectoryRecord* follower = nullptr;
    const TrajectoryRecord* target_lead = nullptr;
    const TrajectoryRecord* current_lead = nullptr;
    for (const TrajectoryRecord* r : by_frame[c.frame]) {
      if (r->vehicle_id == c.changer) continue;
      const double gap = std::abs(r->x - changer->x);
      if (gap > options.max_initial_gap_m) continue;
      if (r->lane_id == c.target_lane) {
        if (r->x < changer->x) {
          if (!follower || r->x > follower->x) follower = r;
        } else if (r->x > changer->x) {
          if (!target_lead || r->x < target_lead->x) target_lead = r;
        }
      } else if (r->lane_id == c.origin_lane && r->x > changer->x) {
        if (!current_lead || r->x < current_lead->x) current_lead = r;
      }
    }
    if (!follower || !target_lead || !current_lead) {
      ++result.skipped;
      continue;
    }

    // Clamp the window to frames every participant actually has.
    int64_t first = c.frame - pre;
    int64_t last = c.frame + post;
    for (int64_t id :
         {c.changer, follower->vehicle_id, target_lead->vehicle_id,
          current_lead->vehicle_id}) {
      const auto& span = spans.at(id);
      first = std::max(first, dataset.records[span.first].frame);
      last = std::min(last, dataset.records[span.second - 1].frame);
    }
    if (first > c.frame || last < c.frame ||
        (last - first + 1) / dataset.frame_rate < options.min_duration_s) {
      ++result.skipped;
      continue;
    }

    InteractionEvent ev;
    ev.event_id = static_cast<int>(result.events.size());
    ev.first_frame = first;
    ev.last_frame = last;
    ev.crossing_frame = c.frame;
    ev.roles[Role::Changer] = c.changer;
    ev.roles[Role::Follower] = follower->vehicle_id;
    ev.roles[Role::TargetLead] = target_lead->vehicle_id;
    ev.roles[Role::CurrentLead] = current_lead->vehicle_id;
    ev.kind = in_ramp(changer->x) ? ScenarioKind::MLC : ScenarioKind::DLC;

    // Yielded iff the follower's pre-crossing actions classify cooperative.
    std::vector<std::pair<int, HvAction>> labels;
    const auto& fspan = spans.at(follower->vehicle_id);
    for (int64_t f = first; f <= c.frame; ++f) {
      const TrajectoryRecord* r = record_at(dataset, fspan, f);
      if (r)
        labels.push_back({static_cast<int>(labels.size()) + 1,
                          classify_action(r->a, options.action_threshold)});
    }
    ev.outcome_yielded =
        !labels.empty() &&
        classify_driver_type(labels, static_cast<int>(labels.size()),
                             options.rho_c) == DriverType::Cooperative;

    result.events.push_back(ev);
  }
  return result;
}

std::vector<FrameStrategy> infer_frame_strategies(
    const InteractionEvent& event, const Dataset& dataset,
    const ExtractionOptions& options) {
  const auto spans = vehicle_spans(dataset);
  const auto& changer_span = spans.at(event.roles.at(Role::Changer));
  const auto& follower_span = spans.at(event.roles.at(Role::Follower));

  // Which way "toward the target lane" points, from the changer's net lateral
  // displacement over the event.
  const TrajectoryRecord* y0 =
      record_at(dataset, changer_span, event.first_frame);
  const TrajectoryRecord* y1 =
      record_at(dataset, changer_span, event.last_frame);
  if (!y0 || !y1) return {};
  const double target_dir = y1->y >= y0->y ? 1.0 : -1.0;

  std::vector<FrameStrategy> out;
  for (int64_t f = event.first_frame; f < event.last_frame; ++f) {
    const TrajectoryRecord* ch = record_at(dataset, changer_span, f);
    const TrajectoryRecord* ch_next = record_at(dataset, changer_span, f + 1);
    const TrajectoryRecord* fo = record_at(dataset, follower_span, f);
    if (!ch || !ch_next || !fo) continue;
    FrameStrategy fs;
    fs.frame = f;
    const double vy = (ch_next->y - ch->y) * dataset.frame_rate * target_dir;
    fs.changer_intent = (vy > 0.2 || f >= event.crossing_frame)
                            ? HavAction::LaneChange
                            : HavAction::Yield;
    fs.follower_accel = fo->a;
    fs.follower_label = classify_action(fo->a, options.action_threshold);
    out.push_back(fs);
  }
  return out;
}

StyleClustering cluster_driving_styles(const Dataset& dataset,
                                       const std::vector<int64_t>& driver_ids,
                                       uint64_t seed) {
  (void)seed;  // the farthest-pair init is deterministic on its own
  StyleClustering out;
  const auto spans = vehicle_spans(dataset);

  std::unordered_map<int64_t, std::vector<const TrajectoryRecord*>> by_frame;
  for (const TrajectoryRecord& r : dataset.records)
    by_frame[r.frame].push_back(&r);

  for (int64_t id : driver_ids) {
    const auto it = spans.find(id);
    if (it == spans.end()) continue;
    StyleFeatures f;
    f.vehicle_id = id;
    double headway_sum = 0.0;
    int headway_n = 0;
    double speed_sum = 0.0, speed_sq = 0.0, abs_a = 0.0;
    int brake_n = 0, n = 0;
    for (size_t k = it->second.first; k < it->second.second; ++k) {
      const TrajectoryRecord& r = dataset.records[k];
      ++n;
      speed_sum += r.v;
      speed_sq += r.v * r.v;
      abs_a += std::abs(r.a);
      if (r.a < -1.0) ++brake_n;
      const TrajectoryRecord* lead = nullptr;
      for (const TrajectoryRecord* o : by_frame[r.frame]) {
        if (o->vehicle_id == id || o->lane_id != r.lane_id) continue;
        if (o->x <= r.x || o->x - r.x > 150.0) continue;
        if (!lead || o->x < lead->x) lead = o;
      }
      if (lead) {
        headway_sum += (lead->x - r.x) / std::max(r.v, 0.1);
        ++headway_n;
      }
    }
    if (n == 0) continue;
    f.mean_headway = headway_n > 0 ? headway_sum / headway_n : 0.0;
    f.decel_rate = static_cast<double>(brake_n) / n;
    f.mean_abs_accel = abs_a / n;
    const double mean_v = speed_sum / n;
    f.speed_variance = speed_sq / n - mean_v * mean_v;
    out.features.push_back(f);
  }

  const size_t n = out.features.size();
  if (n == 0) {
    out.degenerate = true;
    return out;
  }

  // Two z-scored features carry the split: headway and accel magnitude.
  std::vector<std::array<double, 2>> pts(n);
  for (size_t i = 0; i < n; ++i)
    pts[i] = {out.features[i].mean_headway, out.features[i].mean_abs_accel};
  for (int d = 0; d < 2; ++d) {
    double mu = 0.0, sq = 0.0;
    for (const auto& p : pts) mu += p[d];
    mu /= n;
    for (const auto& p : pts) sq += (p[d] - mu) * (p[d] - mu);
    const double sd = std::sqrt(sq / n);
    for (auto& p : pts) p[d] = sd > 1e-12 ? (p[d] - mu) / sd : 0.0;
  }

  auto dist2 = [](const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
  };

  size_t ia = 0, ib = 0;
  double best = -1.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (const double d = dist2(pts[i], pts[j]); d > best) {
        best = d;
        ia = i;
        ib = j;
      }
  if (best < 1e-12) {
    out.degenerate = true;
    out.conservative_fraction = 0.5;
    for (const StyleFeatures& f : out.features)
      out.labels[f.vehicle_id] = DriverType::Cooperative;
    return out;
  }

  std::array<std::array<double, 2>, 2> centers = {pts[ia], pts[ib]};
  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 50; ++iter) {
    bool moved = false;
    for (size_t i = 0; i < n; ++i) {
      const int c = dist2(pts[i], centers[0]) <= dist2(pts[i], centers[1]) ? 0 : 1;
      if (c != assign[i]) {
        assign[i] = c;
        moved = true;
      }
    }
    for (int c = 0; c < 2; ++c) {
      std::array<double, 2> mu{0.0, 0.0};
      int cnt = 0;
      for (size_t i = 0; i < n; ++i)
        if (assign[i] == c) {
          mu[0] += pts[i][0];
          mu[1] += pts[i][1];
          ++cnt;
        }
      if (cnt > 0) centers[c] = {mu[0] / cnt, mu[1] / cnt};
    }
    if (!moved) break;
  }

  // Conservative cluster: longer headway; accel magnitude breaks ties.
  double headway_mu[2] = {0.0, 0.0}, accel_mu[2] = {0.0, 0.0};
  int cnt[2] = {0, 0};
  for (size_t i = 0; i < n; ++i) {
    headway_mu[assign[i]] += out.features[i].mean_headway;
    accel_mu[assign[i]] += out.features[i].mean_abs_accel;
    ++cnt[assign[i]];
  }
  for (int c = 0; c < 2; ++c)
    if (cnt[c] > 0) {
      headway_mu[c] /= cnt[c];
      accel_mu[c] /= cnt[c];
    }
  int conservative;
  if (headway_mu[0] != headway_mu[1])
    conservative = headway_mu[0] > headway_mu[1] ? 0 : 1;
  else
    conservative = accel_mu[0] <= accel_mu[1] ? 0 : 1;

  int n_cons = 0;
  for (size_t i = 0; i < n; ++i) {
    const bool cons = assign[i] == conservative;
    out.labels[out.features[i].vehicle_id] =
        cons ? DriverType::Cooperative : DriverType::NonCooperative;
    if (cons) ++n_cons;
  }
  out.conservative_fraction = static_cast<double>(n_cons) / n;
  return out;
}

SyntheticDataset generate_synthetic(const GenConfig& cfg) {
  if (cfg.n_events <= 0)
    throw std::invalid_argument("generate_synthetic: n_events must be positive");
  SyntheticDataset out;
  out.dataset.frame_rate = 1.0 / cfg.base.dt;
  out.truth.weights = cfg.weights;
  out.truth.tau0 = cfg.params.tau0;

  const int64_t pad = static_cast<int64_t>(
      std::lround(8.0 * out.dataset.frame_rate)) + 8;  // keeps windows disjoint

  int64_t frame_base = 0;
  int64_t next_id = 1;
  std::vector<double> crossing_xs;

  int made = 0;
  for (uint64_t attempt = 0; made < cfg.n_events; ++attempt) {
    if (attempt > static_cast<uint64_t>(cfg.n_events) * 200 + 10000)
      throw std::runtime_error(
          "generate_synthetic: too few episodes complete under this config");
    std::mt19937_64 rng(derive_seed(cfg.seed, attempt));
    const bool conservative = uniform01(rng) < cfg.conservative_share;
    const StyleProfile& style =
        conservative ? cfg.conservative : cfg.aggressive;

    SamplerRanges ranges = cfg.ranges;
    ranges.hv_gap_min = style.hv_gap_min;
    ranges.hv_gap_max = style.hv_gap_max;
    ScenarioConfig scenario = sample_scenario(ranges, rng, cfg.base);

    SimParams params = cfg.params;
    params.hv_kin = style.hv_kin;
    params.disclosure.policy = cfg.policy;

    HvDriverModel model;
    model.type =
        conservative ? DriverType::Cooperative : DriverType::NonCooperative;
    model.lambda = cfg.lambda_strict ? kInf : style.lambda;

    const uint64_t episode_seed = rng();
    scenario.rng_seed = episode_seed;
    const EpisodeResult r =
        run_episode(scenario, cfg.weights, params, model, episode_seed);
    if (!r.completed) continue;

    // The event must be recoverable by extract_events: a single final lane
    // flip with the follower still behind and both leads ahead at the
    // crossing, everyone inside the extraction gap limit. Episodes that
    // finish in any other geometry are rolled again.
    int crossing_step = -1;
    for (size_t step = 0; step < r.trace.size(); ++step) {
      if (r.trace[step].lateral_progress >= 0.5) {
        crossing_step = static_cast<int>(step);
        break;
      }
    }
    if (crossing_step < 0) continue;
    bool recoverable = true;
    for (size_t step = crossing_step + 1; step < r.trace.size(); ++step)
      if (r.trace[step].lateral_progress < 0.5) recoverable = false;
    const Scene& cs = r.trace[crossing_step].scene;
    recoverable = recoverable && cs.hv.x < cs.hav.x && cs.tlv.x > cs.hav.x &&
                  cs.lv.x > cs.hav.x && cs.hav.x - cs.hv.x <= 150.0 &&
                  cs.tlv.x - cs.hav.x <= 150.0 && cs.lv.x - cs.hav.x <= 150.0;
    if (!recoverable) continue;

    const int64_t id_changer = next_id;
    const int64_t id_follower = next_id + 1;
    const int64_t id_current_lead = next_id + 2;
    const int64_t id_target_lead = next_id + 3;
    next_id += 4;

    int64_t crossing = -1;
    for (size_t step = 0; step < r.trace.size(); ++step) {
      const TraceRow& row = r.trace[step];
      const int64_t frame = frame_base + static_cast<int64_t>(step);
      // Lateral position interpolates between lane centers as the ramp runs.
      const double y_changer = row.lateral_progress * cfg.lane_width;
      const int lane_changer = row.lateral_progress >= 0.5 ? 2 : 1;
      if (lane_changer == 2 && crossing < 0) crossing = frame;

      auto push = [&](int64_t id, const VehicleState& s, double y, int lane) {
        TrajectoryRecord rec;
        rec.frame = frame;
        rec.vehicle_id = id;
        rec.x = s.x;
        rec.y = y;
        rec.v = s.v;
        rec.a = s.a;
        rec.lane_id = lane;
        out.dataset.records.push_back(rec);
      };
      push(id_changer, row.scene.hav, y_changer, lane_changer);
      push(id_follower, row.scene.hv, cfg.lane_width, 2);
      push(id_current_lead, row.scene.lv, 0.0, 1);
      push(id_target_lead, row.scene.tlv, cfg.lane_width, 2);

      if (crossing == frame) crossing_xs.push_back(row.scene.hav.x);
    }
    if (crossing < 0) continue;  // completed but never flipped; defensive

    TruthEvent ev;
    ev.event_id = made;
    ev.first_frame = frame_base;
    ev.last_frame = frame_base + static_cast<int64_t>(r.trace.size()) - 1;
    ev.roles[Role::Changer] = id_changer;
    ev.roles[Role::Follower] = id_follower;
    ev.roles[Role::CurrentLead] = id_current_lead;
    ev.roles[Role::TargetLead] = id_target_lead;
    ev.kind = scenario.kind;
    ev.hv_type = model.type;
    ev.hv_style = model.type;
    ev.episode_seed = episode_seed;
    out.truth.events.push_back(ev);

    frame_base = ev.last_frame + pad;
    ++made;
  }

  if (cfg.ranges.kind == ScenarioKind::MLC && !crossing_xs.empty()) {
    const auto [lo, hi] =
        std::minmax_element(crossing_xs.begin(), crossing_xs.end());
    out.truth.ramp_zones.push_back({*lo - 10.0, *hi + 10.0});
  }

  sort_records(out.dataset);
  return out;
}

void write_ground_truth(const std::string& path, const GroundTruth& truth) {
  nlohmann::json j;
  j["weights"] = {{"w_e", truth.weights.w_e},
                  {"w_s", truth.weights.w_s},
                  {"w_a", truth.weights.w_a}};
  j["tau0"] = truth.tau0;
  j["ramp_zones"] = nlohmann::json::array();
  for (const auto& [lo, hi] : truth.ramp_zones)
    j["ramp_zones"].push_back({lo, hi});
  j["events"] = nlohmann::json::array();
  for (const TruthEvent& e : truth.events) {
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
  write_file(path, j.dump(2) + "\n");
}

GroundTruth read_ground_truth(const std::string& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  GroundTruth truth;
  truth.weights.w_e = j.at("weights").at("w_e").get<double>();
  truth.weights.w_s = j.at("weights").at("w_s").get<double>();
  truth.weights.w_a = j.at("weights").at("w_a").get<double>();
  truth.tau0 = j.at("tau0").get<double>();
  for (const auto& z : j.at("ramp_zones"))
    truth.ramp_zones.push_back({z.at(0).get<double>(), z.at(1).get<double>()});
  for (const auto& je : j.at("events")) {
    TruthEvent e;
    e.event_id = je.at("event_id").get<int>();
    e.first_frame = je.at("first_frame").get<int64_t>();
    e.last_frame = je.at("last_frame").get<int64_t>();
    for (const auto& [key, val] : je.at("roles").items())
      e.roles[parse_role(key)] = val.get<int64_t>();
    e.kind = parse_scenario_kind_or_throw(je.at("kind").get<std::string>());
    e.hv_type = parse_driver_type(je.at("hv_type").get<std::string>());
    e.hv_style = parse_driver_type(je.at("hv_style").get<std::string>());
    e.episode_seed = je.at("episode_seed").get<uint64_t>();
    truth.events.push_back(e);
  }
  return truth;
}

}  // namespace negosim
