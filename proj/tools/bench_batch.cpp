// Times run_batch_serial against run_batch_parallel on the same config and
// checks the results agree pair by pair. Usage: bench_batch [n_pairs] [jobs].

#include "negosim/io.hpp"
#include "negosim/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace negosim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

bool same_summary(const EpisodeSummary& a, const EpisodeSummary& b) {
  auto same_double = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.completed == b.completed && a.collision == b.collision &&
         same_double(a.lane_change_time, b.lane_change_time) &&
         same_double(a.min_tdtc, b.min_tdtc) && a.steps == b.steps &&
         a.deception_events == b.deception_events &&
         a.protective_termination == b.protective_termination &&
         same_double(a.tau_final, b.tau_final);
}

}  // namespace

int main(int argc, char** argv) {
  BatchConfig cfg;
  cfg.n_pairs = argc > 1 ? std::atoi(argv[1]) : 200;
  int jobs = argc > 2 ? std::atoi(argv[2]) : 0;
  cfg.seed = 12345;
  cfg.weights = {0.724, 0.529, 0.751};
  cfg.params.tau0 = 0.8;
  cfg.params.disclosure.policy = DisclosurePolicy::Deceptive;
  if (cfg.n_pairs <= 0) {
    std::cerr << "n_pairs must be positive\n";
    return 2;
  }

#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#else
  jobs = 1;
#endif

  const auto t0 = std::chrono::steady_clock::now();
  const BatchResult serial = run_batch_serial(cfg);
  const double t_serial = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const BatchResult parallel = run_batch_parallel(cfg, jobs);
  const double t_parallel = seconds_since(t1);

  bool equal = serial.pairs.size() == parallel.pairs.size();
  for (size_t i = 0; equal && i < serial.pairs.size(); ++i) {
    const PairRecord& a = serial.pairs[i];
    const PairRecord& b = parallel.pairs[i];
    equal = a.index == b.index && a.seed == b.seed && a.hv_type == b.hv_type &&
            same_summary(a.honest, b.honest) &&
            same_summary(a.deceptive, b.deceptive);
  }
  equal = equal && batch_stats_json(serial.stats) ==
                       batch_stats_json(parallel.stats);

  std::cout << "pairs: " << cfg.n_pairs << "\n"
            << "serial:   " << t_serial << " s\n"
            << "parallel: " << t_parallel << " s  (jobs=" << jobs << ")\n"
            << "speedup:  " << (t_parallel > 0 ? t_serial / t_parallel : 0.0)
            << "x\n"
            << "results identical: " << (equal ? "yes" : "NO") << "\n";
  return equal ? 0 : 1;
}
