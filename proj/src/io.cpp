#include "negosim/io.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace negosim {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  const std::string text = read_file(path);
  CsvTable table;
  size_t pos = 0;
  size_t line_no = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size())
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected " +
                                 std::to_string(table.header.size()) +
                                 " fields, got " +
                                 std::to_string(fields.size()));
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty())
    throw std::runtime_error(path + ": empty csv");
  return table;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> read_ini(const std::string& text) {
  std::map<std::string, std::string> out;
  std::string section;
  size_t pos = 0;
  size_t line_no = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("ini line " + std::to_string(line_no) +
                                    ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::invalid_argument("ini line " + std::to_string(line_no) +
                                    ": empty section name");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("ini line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("ini line " + std::to_string(line_no) +
                                  ": empty key");
    out[section.empty() ? key : section + "." + key] = value;
    if (pos > text.size()) break;
  }
  return out;
}

std::string episode_trace_csv(const EpisodeResult& result, double dt) {
  std::string out =
      "step,time,tau,intended,disclosed,deception_active,hv_action,"
      "u_hav,u_hv,committed,lateral_progress,"
      "hav_x,hav_v,hav_a,hav_lane,hv_x,hv_v,hv_a,lv_x,lv_v,lv_a,"
      "tlv_x,tlv_v,tlv_a\n";
  for (const TraceRow& r : result.trace) {
    out += std::to_string(r.t);
    out += ',';
    out += format_double(r.t * dt);
    out += ',';
    out += format_double(r.tau);
    out += ',';
    out += to_string(r.intended);
    out += ',';
    out += to_string(r.disclosed);
    out += ',';
    out += r.deception_active ? "1" : "0";
    out += ',';
    out += to_string(r.hv_action);
    out += ',';
    out += format_double(r.u_hav);
    out += ',';
    out += format_double(r.u_hv);
    out += ',';
    out += r.committed ? "1" : "0";
    out += ',';
    out += format_double(r.lateral_progress);
    for (const VehicleState* s :
         {&r.scene.hav, &r.scene.hv, &r.scene.lv, &r.scene.tlv}) {
      out += ',';
      out += format_double(s->x);
      out += ',';
      out += format_double(s->v);
      out += ',';
      out += format_double(s->a);
      if (s == &r.scene.hav) {
        out += ',';
        out += to_string(s->lane);
      }
    }
    out += '\n';
  }
  return out;
}

std::string batch_pairs_csv(const BatchResult& result) {
  std::string out =
      "pair,seed,hv_type,"
      "honest_completed,honest_collision,honest_lct,honest_min_tdtc,"
      "honest_steps,"
      "deceptive_completed,deceptive_collision,deceptive_lct,"
      "deceptive_min_tdtc,deceptive_steps,"
      "deception_events,deception_events_lc,deception_successes_lc,"
      "deception_events_yield,deception_successes_yield,"
      "protective_termination,honest_tau_final,deceptive_tau_final\n";
  auto arm = [](std::string& s, const EpisodeSummary& e) {
    s += e.completed ? "1" : "0";
    s += ',';
    s += e.collision ? "1" : "0";
    s += ',';
    s += format_double(e.lane_change_time);
    s += ',';
    s += format_double(e.min_tdtc);
    s += ',';
    s += std::to_string(e.steps);
  };
  for (const PairRecord& p : result.pairs) {
    out += std::to_string(p.index);
    out += ',';
    out += std::to_string(p.seed);
    out += ',';
    out += to_string(p.hv_type);
    out += ',';
    arm(out, p.honest);
    out += ',';
    arm(out, p.deceptive);
    out += ',';
    out += std::to_string(p.deceptive.deception_events);
    out += ',';
    out += std::to_string(p.deceptive.deception_events_lc);
    out += ',';
    out += std::to_string(p.deceptive.deception_successes_lc);
    out += ',';
    out += std::to_string(p.deceptive.deception_events_yield);
    out += ',';
    out += std::to_string(p.deceptive.deception_successes_yield);
    out += ',';
    out += p.deceptive.protective_termination ? "1" : "0";
    out += ',';
    out += format_double(p.honest.tau_final);
    out += ',';
    out += format_double(p.deceptive.tau_final);
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json quantiles_json(const Quantiles& q) {
  return {{"n", q.n},     {"mean", q.mean}, {"p10", q.p10}, {"p25", q.p25},
          {"p50", q.p50}, {"p75", q.p75},   {"p90", q.p90}};
}

}  // namespace

std::string batch_stats_json(const BatchStats& stats) {
  nlohmann::json j;
  j["n_pairs"] = stats.n_pairs;
  j["n_valid"] = stats.n_valid;
  j["lct_reduced"] = stats.lct_reduced;
  j["lct_ties"] = stats.lct_ties;
  j["tdtc_increased"] = stats.tdtc_increased;
  j["tdtc_ties"] = stats.tdtc_ties;
  j["frac_lct_reduced"] = stats.frac_lct_reduced;
  j["frac_tdtc_increased"] = stats.frac_tdtc_increased;
  j["lct_win_rate_ties_half"] = stats.lct_win_rate_ties_half;
  j["deception_events_lc"] = stats.deception_events_lc;
  j["deception_successes_lc"] = stats.deception_successes_lc;
  j["deception_events_yield"] = stats.deception_events_yield;
  j["deception_successes_yield"] = stats.deception_successes_yield;
  j["success_rate_lc_intended"] = stats.success_rate_lc_intended;
  j["success_rate_yield_intended"] = stats.success_rate_yield_intended;
  j["protective_terminations"] = stats.protective_terminations;
  j["trust_collapse_fraction"] = stats.trust_collapse_fraction;
  j["lct_honest"] = quantiles_json(stats.lct_honest);
  j["lct_deceptive"] = quantiles_json(stats.lct_deceptive);
  j["tdtc_honest"] = quantiles_json(stats.tdtc_honest);
  j["tdtc_deceptive"] = quantiles_json(stats.tdtc_deceptive);
  return j.dump(2) + "\n";
}

std::string stage_game_csv(const StageGame& game) {
  std::string out = "column,type,disclosed,action,u_hav,u_hv\n";
  for (int c = 0; c < kNumColumns; ++c) {
    for (int a = 0; a < kNumActions; ++a) {
      out += std::to_string(c);
      out += ',';
      out += to_string(column_type(c));
      out += ',';
      out += to_string(column_disclosure(c));
      out += ',';
      out += to_string(static_cast<HvAction>(a));
      out += ',';
      out += format_double(game.u_hav[c][a]);
      out += ',';
      out += format_double(game.u_hv[c][a]);
      out += '\n';
    }
  }
  return out;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["seed"] = manifest.seed;
  j["config"] = manifest.config;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  j["created_at"] = manifest.created_at;
  return j.dump(2) + "\n";
}

std::string timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace negosim
