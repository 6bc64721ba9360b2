#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spinlearn/harness/config.hpp"
#include "spinlearn/harness/evaluate.hpp"
#include "spinlearn/harness/pipeline.hpp"

namespace spinlearn::harness {

struct BenchRow {
  int sites = 0;
  std::size_t instances = 0;
  double exact_seconds = 0.0;    // mean wall time of one exact evolution
  double network_seconds = 0.0;  // mean wall time of one network evaluation
  double exact_steps = 0.0;      // mean accepted integrator steps
};

/// Runtime table. The network is freshly initialized: its cost does not depend
/// on the parameter values, so no trained checkpoint per size is needed.
struct BenchResult {
  std::vector<BenchRow> rows;
  std::size_t network_steps = 0;
  /// log t_exact = a + rate * M
  double exact_rate = 0.0;
  /// log t_network = a + exponent * log M
  double network_exponent = 0.0;

  const BenchRow& at(int sites) const;
};

BenchResult run_bench(const BenchConfig& cfg, const Workspace& ws);

/// sites,instances,exact_seconds,network_seconds,exact_steps followed by
/// comment lines with the fitted growth rates.
std::string bench_csv(const BenchResult& r);

struct SweepResult {
  std::vector<double> g_values;
  std::vector<EvalReport> reports;
};

/// Trains (or reuses) one model per g, evaluates each with entropy curves and
/// writes output/g_<g>/, output/sweep.csv and output/entropy.csv.
SweepResult run_sweep_g(const Workspace& ws, const SweepCommand& cmd);

/// Heisenberg pipeline with the drive bound to J_x; report in output/.
EvalReport run_heisenberg(const Workspace& ws, const HeisenbergCommand& cmd);

}  // namespace spinlearn::harness
