#pragma once

#include "negosim/sim.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace negosim {

// Shortest round-trip decimal form (std::to_chars); infinities print as inf.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// FNV-1a 64 over raw bytes, hex-encoded; used for input digests in manifests.
std::string fnv1a_hex(const std::string& bytes);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);
std::string to_csv(const CsvTable& table);

// Flat INI: `key = value` lines under `[section]` headers; `#` comments.
// Keys are returned as "section.key".
std::map<std::string, std::string> read_ini(const std::string& text);

std::string episode_trace_csv(const EpisodeResult& result, double dt);
std::string batch_pairs_csv(const BatchResult& result);
std::string batch_stats_json(const BatchStats& stats);

// Payoff tables of one stage game, one row per (column, action).
std::string stage_game_csv(const StageGame& game);

struct RunManifest {
  std::string command;
  std::string version = kVersion;
  uint64_t seed = 0;
  std::map<std::string, std::string> config;   // resolved key/value view
  std::map<std::string, std::string> inputs;   // path -> digest
  std::vector<std::string> outputs;
  std::string created_at;  // RFC 3339; excluded from reproducibility checks
};

std::string manifest_json(const RunManifest& manifest);
std::string timestamp_now();

}  // namespace negosim
