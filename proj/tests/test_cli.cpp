#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "negosim/config.hpp"
#include "negosim/io.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

// End-to-end checks against the built binary (path injected by the build).
// Every run goes through a scratch directory under the system temp dir, and
// NEGOSIM_OUT is scrubbed from the environment unless a case sets it.

namespace fs = std::filesystem;
using negosim::read_file;
using negosim::write_file;
using nlohmann::json;

namespace {

const std::string kBin = NEGOSIM_BIN;
const std::string kConfigs = NEGOSIM_CONFIG_DIR;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_root() {
  static const fs::path root =
      fs::temp_directory_path() / "negosim_cli_test";
  return root;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = scratch_root() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunResult run(const std::string& args, const std::string& env = "") {
  const fs::path dir = scratch_root();
  fs::create_directories(dir);
  const std::string out_path = (dir / "stdout.txt").string();
  const std::string err_path = (dir / "stderr.txt").string();
  const std::string cmd = "env -u NEGOSIM_OUT " + env + (env.empty() ? "" : " ") +
                          kBin + " " + args + " >" + out_path + " 2>" +
                          err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (const char c : text)
    if (c == '\n') ++n;
  return n;
}

json manifest_without_timestamp(const fs::path& dir) {
  json m = json::parse(read_file((dir / "manifest.json").string()));
  m.erase("created_at");
  return m;
}

std::string tiny_gen_ini(int n_events, uint64_t seed) {
  return "[gen]\n"
         "n_events = " + std::to_string(n_events) + "\n"
         "seed = " + std::to_string(seed) + "\n"
         "lambda_strict = true\n"
         "[weights]\n"
         "w_e = 0.724\nw_s = 0.529\nw_a = 0.751\n"
         "[ranges]\n"
         "hv_dv_min = -2\nhv_dv_max = 4\n"
         "tlv_dv_min = -1\ntlv_dv_max = 2\n"
         "[style.conservative]\n"
         "accelerate = 1.5\nmaintain = 0\ndecelerate = -3\n"
         "[style.aggressive]\n"
         "accelerate = 1.5\nmaintain = 0\ndecelerate = -3\n";
}

std::string tiny_calibrate_ini(uint64_t seed) {
  return "[data]\nframe_rate = 5\n"
         "[ga]\n"
         "population = 8\ngenerations = 4\n"
         "seed = " + std::to_string(seed) + "\n";
}

}  // namespace

TEST_CASE("bundled configs parse with their intended readers") {
  int checked = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    const std::string name = entry.path().filename().string();
    const std::string text = read_file(entry.path().string());
    CAPTURE(name);
    if (starts_with(name, "simulate_") || starts_with(name, "episode_")) {
      CHECK_NOTHROW(negosim::parse_simulate_config(text));
    } else if (starts_with(name, "gen_")) {
      CHECK_NOTHROW(negosim::parse_gen_config(text));
    } else if (starts_with(name, "calibrate_")) {
      CHECK_NOTHROW(negosim::parse_calibrate_config(text));
    } else if (starts_with(name, "infer_")) {
      CHECK_NOTHROW(negosim::parse_infer_config(text));
    } else if (starts_with(name, "likelihoods_")) {
      const auto table = negosim::parse_likelihood_csv(text);
      CHECK(negosim::likelihood_csv(table) == text);
    } else {
      FAIL("unexpected config file ", name);
    }
    ++checked;
  }
  CHECK(checked >= 8);
}

TEST_CASE("usage errors exit 2, missing inputs exit 1") {
  CHECK(run("").code == 2);
  CHECK(run("simulate").code == 2);  // missing required positional
  CHECK(run("--help").code == 0);

  const fs::path out = scratch_root() / "never_created";
  fs::remove_all(out);
  RunResult r = run("simulate /nonexistent/missing.ini --out_dir " +
                    out.string());
  CHECK(r.code == 1);
  CHECK(starts_with(r.err, "error: cannot open"));
  CHECK(!fs::exists(out));

  const fs::path dir = fresh_dir("badcfg");
  write_file((dir / "bad.ini").string(), "[weights]\nw_e = 1\nbogus = 2\n");
  r = run("simulate " + (dir / "bad.ini").string() + " --out_dir " +
          out.string());
  CHECK(r.code == 2);
  CHECK(starts_with(r.err, "config error:"));
  CHECK(!fs::exists(out));

  // no --out_dir and no NEGOSIM_OUT
  r = run("simulate " + kConfigs + "/simulate_single.ini");
  CHECK(r.code == 2);
  CHECK(r.err.find("no output directory") != std::string::npos);
}

TEST_CASE("gen writes a dataset and reruns byte-identically") {
  const fs::path dir = fresh_dir("gen");
  write_file((dir / "gen.ini").string(), tiny_gen_ini(8, 5));

  const fs::path out_a = dir / "a";
  RunResult r = run("gen " + (dir / "gen.ini").string() + " --out_dir " +
                    out_a.string());
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  for (const char* f : {"trajectories.csv", "ground_truth.json", "manifest.json"})
    CHECK(fs::exists(out_a / f));

  const json truth = json::parse(read_file((out_a / "ground_truth.json").string()));
  CHECK(truth["events"].size() == 8);
  CHECK(truth["weights"]["w_s"].get<double>() == doctest::Approx(0.529));

  const json manifest = json::parse(read_file((out_a / "manifest.json").string()));
  CHECK(manifest["command"] == "gen");
  CHECK(manifest["seed"] == 5);

  const fs::path out_b = dir / "b";
  r = run("gen " + (dir / "gen.ini").string() + " --out_dir " + out_b.string());
  REQUIRE(r.code == 0);
  CHECK(read_file((out_a / "trajectories.csv").string()) ==
        read_file((out_b / "trajectories.csv").string()));
  CHECK(read_file((out_a / "ground_truth.json").string()) ==
        read_file((out_b / "ground_truth.json").string()));
  CHECK(manifest_without_timestamp(out_a) == manifest_without_timestamp(out_b));

  // --seed overrides the config seed
  const fs::path out_c = dir / "c";
  r = run("gen " + (dir / "gen.ini").string() + " --seed 9 --out_dir " +
          out_c.string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(read_file((out_c / "manifest.json").string()))["seed"] == 9);
  CHECK(read_file((out_a / "trajectories.csv").string()) !=
        read_file((out_c / "trajectories.csv").string()));

  write_file((dir / "zero.ini").string(), tiny_gen_ini(0, 5));
  r = run("gen " + (dir / "zero.ini").string() + " --out_dir " +
          (dir / "z").string());
  CHECK(r.code == 2);
  CHECK(starts_with(r.err, "config error:"));
}

TEST_CASE("simulate runs the bundled single scene") {
  const fs::path out = fresh_dir("sim_single");
  RunResult r = run("simulate " + kConfigs + "/simulate_single.ini --out_dir " +
                    out.string());
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  for (const char* f : {"trace_000_honest.csv", "trace_000_deceptive.csv",
                        "pairs.csv", "summary.json", "manifest.json"})
    CHECK(fs::exists(out / f));

  const json summary = json::parse(read_file((out / "summary.json").string()));
  CHECK(summary["n"] == 1);
  CHECK(summary["policy"] == "both");
  CHECK(summary["scene_source"] == "fixed");
  CHECK(summary.contains("stats"));
  CHECK(count_lines(read_file((out / "pairs.csv").string())) == 2);

  // single policy: one trace per pair, count summary instead of pair stats
  const fs::path out_h = fresh_dir("sim_honest");
  r = run("simulate " + kConfigs + "/simulate_single.ini --policy honest "
          "--out_dir " + out_h.string());
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out_h / "trace_000_honest.csv"));
  CHECK(!fs::exists(out_h / "trace_000_deceptive.csv"));
  const json sh = json::parse(read_file((out_h / "summary.json").string()));
  CHECK(sh.contains("completed"));
  CHECK(sh["policy"] == "honest");
}

TEST_CASE("simulate batches are deterministic across reruns and jobs") {
  const fs::path dir = fresh_dir("sim_batch");
  std::string ini = read_file(kConfigs + "/simulate_batch.ini");
  // same config, 6 pairs instead of 500
  const size_t pos = ini.find("n_pairs = 500");
  REQUIRE(pos != std::string::npos);
  ini.replace(pos, 13, "n_pairs = 6");
  write_file((dir / "batch.ini").string(), ini);

  const fs::path out_a = dir / "a";
  RunResult r = run("simulate " + (dir / "batch.ini").string() +
                    " --out_dir " + out_a.string());
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  CHECK(count_lines(read_file((out_a / "pairs.csv").string())) == 7);
  const json summary = json::parse(read_file((out_a / "summary.json").string()));
  CHECK(summary["scene_source"] == "sampled");
  CHECK(summary["n"] == 6);

  const fs::path out_b = dir / "b";
  REQUIRE(run("simulate " + (dir / "batch.ini").string() + " --out_dir " +
              out_b.string())
              .code == 0);
  const fs::path out_j = dir / "j";
  REQUIRE(run("simulate " + (dir / "batch.ini").string() +
              " --jobs 2 --out_dir " + out_j.string())
              .code == 0);

  for (const auto& entry : fs::directory_iterator(out_a)) {
    const std::string name = entry.path().filename().string();
    CAPTURE(name);
    if (name == "manifest.json") {
      CHECK(manifest_without_timestamp(out_a) == manifest_without_timestamp(out_b));
      CHECK(manifest_without_timestamp(out_a) == manifest_without_timestamp(out_j));
    } else {
      const std::string a = read_file((out_a / name).string());
      CHECK(a == read_file((out_b / name).string()));
      CHECK(a == read_file((out_j / name).string()));
    }
  }
}

TEST_CASE("calibrate fits weights from generated data") {
  const fs::path dir = fresh_dir("cal");
  write_file((dir / "gen.ini").string(), tiny_gen_ini(25, 41));
  const fs::path data_dir = dir / "data";
  REQUIRE(run("gen " + (dir / "gen.ini").string() + " --out_dir " +
              data_dir.string())
              .code == 0);
  const std::string data = (data_dir / "trajectories.csv").string();

  write_file((dir / "cal.ini").string(), tiny_calibrate_ini(2));
  const fs::path out = dir / "out";
  RunResult r = run("calibrate " + data + " " + (dir / "cal.ini").string() +
                    " --out " + out.string());
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  for (const char* f : {"result.json", "history.csv", "manifest.json"})
    CHECK(fs::exists(out / f));

  const json result = json::parse(read_file((out / "result.json").string()));
  CHECK(result["events_total"] == 25);
  CHECK(result["history"].size() == 4);
  CHECK(result["val_tpr"].get<double>() >= 0.9);
  CHECK(result["best"].contains("w_e"));
  CHECK(count_lines(read_file((out / "history.csv").string())) == 5);
  const json manifest = json::parse(read_file((out / "manifest.json").string()));
  CHECK(manifest["inputs"].size() == 2);

  // too little data refuses to fit and leaves nothing behind
  write_file((dir / "gen3.ini").string(), tiny_gen_ini(3, 41));
  const fs::path small_dir = dir / "small";
  REQUIRE(run("gen " + (dir / "gen3.ini").string() + " --out_dir " +
              small_dir.string())
              .code == 0);
  const fs::path out2 = dir / "out2";
  r = run("calibrate " + (small_dir / "trajectories.csv").string() + " " +
          (dir / "cal.ini").string() + " --out " + out2.string());
  CHECK(r.code == 1);
  CHECK(r.err.find("insufficient events: extracted 3, need at least 20") !=
        std::string::npos);
  CHECK(!fs::exists(out2));
}

TEST_CASE("infer labels drivers from generated data") {
  const fs::path dir = fresh_dir("infer");
  write_file((dir / "gen.ini").string(), tiny_gen_ini(10, 77));
  const fs::path data_dir = dir / "data";
  REQUIRE(run("gen " + (dir / "gen.ini").string() + " --out_dir " +
              data_dir.string())
              .code == 0);
  const std::string data = (data_dir / "trajectories.csv").string();

  const fs::path out_all = dir / "all";
  RunResult r = run("infer " + data + " --config " + kConfigs +
                    "/infer_default.ini --all --out " + out_all.string());
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  for (const char* f : {"traces.csv", "labels.csv", "events.csv", "manifest.json"})
    CHECK(fs::exists(out_all / f));
  CHECK(count_lines(read_file((out_all / "labels.csv").string())) == 11);
  CHECK(count_lines(read_file((out_all / "events.csv").string())) == 11);

  // one driver: every labeled event has that follower
  const json truth =
      json::parse(read_file((data_dir / "ground_truth.json").string()));
  const int64_t follower =
      truth["events"][0]["roles"]["follower"].get<int64_t>();
  const fs::path out_one = dir / "one";
  r = run("infer " + data + " --driver " + std::to_string(follower) +
          " --out " + out_one.string());
  REQUIRE(r.code == 0);
  const negosim::CsvTable labels =
      negosim::read_csv((out_one / "labels.csv").string());
  REQUIRE(labels.rows.size() >= 1);
  const int fid = labels.column("follower_id");
  for (const auto& row : labels.rows)
    CHECK(row[fid] == std::to_string(follower));

  r = run("infer " + data + " --driver 424242 --out " + (dir / "x").string());
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown driver id 424242") != std::string::npos);
  CHECK(!fs::exists(dir / "x"));

  r = run("infer " + data + " --out " + (dir / "y").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("--driver <id> or --all") != std::string::npos);

  r = run("infer " + data + " --driver 1 --all --out " + (dir / "z").string());
  CHECK(r.code == 2);
}

TEST_CASE("NEGOSIM_OUT supplies the output directory") {
  const fs::path dir = fresh_dir("envout");
  write_file((dir / "gen.ini").string(), tiny_gen_ini(5, 3));
  const fs::path out = dir / "from_env";
  RunResult r = run("gen " + (dir / "gen.ini").string(),
                    "NEGOSIM_OUT=" + out.string());
  CAPTURE(r.err);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "trajectories.csv"));
  CHECK(fs::exists(out / "manifest.json"));
}
